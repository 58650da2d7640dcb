#include "khmc/rng.hpp"

namespace khmc {

namespace {

// SplitMix64 step (Steele, Lea & Flood 2014).  Used only to turn a
// (seed, stream) pair into a well-mixed 64-bit engine seed.
std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed;
  std::uint64_t a = splitmix64(state);
  state ^= stream * 0xda942042e4dd58b5ULL + 0x2545f4914f6cdd1dULL;
  std::uint64_t b = splitmix64(state);
  return a ^ (b + 0x9e3779b97f4a7c15ULL);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(mix_seed(seed, stream)) {}

Rng Rng::derive(std::uint64_t stream) const { return Rng(seed_, stream); }

double Rng::uniform() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double Rng::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double Rng::normal() {
  return std::normal_distribution<double>(0.0, 1.0)(engine_);
}

double Rng::gamma(double shape) {
  return std::gamma_distribution<double>(shape, 1.0)(engine_);
}

double Rng::student_t(double dof) {
  return std::student_t_distribution<double>(dof)(engine_);
}

long Rng::uniform_int(long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(engine_);
}

}  // namespace khmc
