#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

#include "khmc/linalg.hpp"
#include "khmc/rng.hpp"

namespace khmc {

/// Position/momentum pair, the state of Hamiltonian flow.  Construction
/// rejects mismatched dimensions and non-finite entries.
struct PhasePoint {
  Vector x;
  Vector p;

  PhasePoint(Vector x_, Vector p_) : x(std::move(x_)), p(std::move(p_)) {
    if (x.size() != p.size())
      throw std::invalid_argument("PhasePoint: position/momentum dimension mismatch");
    if (!all_finite(x) || !all_finite(p))
      throw std::invalid_argument("PhasePoint: non-finite coordinate");
  }

  std::size_t dim() const { return x.size(); }
};

/// Potential energy U of a target density pi(x) proportional to exp{-U(x)},
/// with its analytic gradient.  Implementations are immutable after
/// construction and shareable across threads unless documented otherwise.
class TargetPotential {
 public:
  virtual ~TargetPotential() = default;

  virtual std::size_t dim() const = 0;
  virtual double evaluate(std::span<const double> x) const = 0;
  /// Writes grad U(x) into out (same length as x).
  virtual void gradient(std::span<const double> x, std::span<double> out) const = 0;

  Vector gradient(std::span<const double> x) const {
    Vector g(x.size());
    gradient(x, g);
    return g;
  }

 protected:
  void check_dim(std::span<const double> x) const {
    if (x.size() != dim())
      throw std::invalid_argument("TargetPotential: dimension mismatch");
  }
};

/// Kinetic energy K defining the momentum distribution nu(p) proportional
/// to exp{-K(p)}.  K is even, so grad K is odd.  sample() draws exactly
/// from nu.
class KineticEnergySpec {
 public:
  virtual ~KineticEnergySpec() = default;

  virtual std::size_t dim() const = 0;
  virtual double evaluate(std::span<const double> p) const = 0;
  virtual void gradient(std::span<const double> p, std::span<double> out) const = 0;
  virtual void sample(Rng& rng, std::span<double> out) const = 0;
  virtual std::string name() const = 0;

  Vector gradient(std::span<const double> p) const {
    Vector g(p.size());
    gradient(p, g);
    return g;
  }

  Vector sample(Rng& rng) const {
    Vector p(dim());
    sample(rng, p);
    return p;
  }

 protected:
  void check_dim(std::span<const double> p) const {
    if (p.size() != dim())
      throw std::invalid_argument("KineticEnergySpec: dimension mismatch");
  }
};

/// H(x, p) = U(x) + K(p).  Throws on dimension mismatch or a non-finite
/// result.
double hamiltonian(const TargetPotential& target, const KineticEnergySpec& kin,
                   const PhasePoint& s);

}  // namespace khmc
