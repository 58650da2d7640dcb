#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "khmc/rng.hpp"

namespace khmc {

/// Raised when adaptive rejection sampling detects that its inputs are not
/// log-concave (an evaluated point lies above the tangent upper hull) or
/// the initial abscissae cannot bracket the mode.
class ArsError : public std::runtime_error {
 public:
  explicit ArsError(const std::string& what) : std::runtime_error(what) {}
};

/// Adaptive rejection sampler for a log-concave density on the real line
/// (Gilks & Wild).  The upper hull is built from tangents at the abscissae,
/// the lower hull from chords; each rejection refines the envelope with the
/// evaluated point.  Draws are exact.
class ArsSampler {
 public:
  using Fn = std::function<double(double)>;

  /// logdens/dlogdens evaluate the log density (up to a constant) and its
  /// derivative.  The initial abscissae must satisfy dlogdens(lo) > 0 and
  /// dlogdens(hi) < 0; otherwise ArsError ("failure to bracket mode").
  ArsSampler(Fn logdens, Fn dlogdens, double lo, double hi);

  double sample(Rng& rng);

  // Envelope statistics, used for efficiency regression tests.
  std::size_t proposals() const { return n_proposals_; }
  std::size_t squeeze_accepts() const { return n_squeeze_accepts_; }
  std::size_t density_evals() const { return n_evals_; }
  std::size_t refinements() const { return n_refinements_; }
  std::size_t abscissa_count() const { return xs_.size(); }
  void reset_counters();

 private:
  struct Segment {
    double lo, hi;     // breakpoints (may be +-inf at the ends)
    double log_mass;   // log integral of the envelope over [lo, hi]
  };

  void rebuild();
  double upper_hull(double x) const;
  double lower_hull(double x) const;
  void insert(double x, double h, double dh);
  double draw_from_envelope(Rng& rng) const;

  Fn logdens_, dlogdens_;
  std::vector<double> xs_, hs_, dhs_;  // sorted abscissae with h, h'
  std::vector<Segment> segments_;      // one per abscissa
  bool dirty_ = true;

  std::size_t n_proposals_ = 0;
  std::size_t n_squeeze_accepts_ = 0;
  std::size_t n_evals_ = 0;
  std::size_t n_refinements_ = 0;

  static constexpr double kConcavityTol = 1e-9;
  static constexpr std::size_t kMaxAbscissae = 128;
};

/// Single exact draw from a log-concave density.  init must bracket the
/// mode by derivative sign.
double ars_sample(const ArsSampler::Fn& logdens, const ArsSampler::Fn& dlogdens,
                  std::pair<double, double> init, Rng& rng);

/// Expands {-scale, +scale} geometrically (factor 2, up to 60 doublings)
/// until the derivative signs bracket the mode.  Throws ArsError if the
/// bracket cannot be found.
std::pair<double, double> ars_bracket(const ArsSampler::Fn& dlogdens, double scale);

}  // namespace khmc
