#pragma once

#include <cstdint>
#include <random>

namespace khmc {

/// Seed-reproducible random number generator with derivable sub-streams.
///
/// The engine is std::mt19937_64 seeded through a SplitMix64 mix of
/// (seed, stream), so a master seed plus a chain index yields independent
/// per-chain streams.  Identical (seed, stream) pairs give bit-identical
/// draw sequences within one build of the library.  Stream 0 of a seed is
/// the stream used by single-chain runs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  /// Independent generator for the given sub-stream of the same master seed.
  Rng derive(std::uint64_t stream) const;

  /// Uniform on (0, 1).
  double uniform();
  /// Uniform on (lo, hi).
  double uniform(double lo, double hi);
  /// Standard normal.
  double normal();
  /// Gamma with the given shape, unit scale.
  double gamma(double shape);
  /// Student t with dof degrees of freedom.
  double student_t(double dof);
  /// Uniform integer on [lo, hi] inclusive.
  long uniform_int(long lo, long hi);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  // UniformRandomBitGenerator interface, usable with std distributions.
  using result_type = std::mt19937_64::result_type;
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

}  // namespace khmc
