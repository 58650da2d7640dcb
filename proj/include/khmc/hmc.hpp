#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "khmc/integrator.hpp"
#include "khmc/model.hpp"

namespace khmc {

/// Distribution of the leapfrog step count L per iteration.
struct FixedSteps {
  long l = 1;
};
struct UniformSteps {
  long lo = 1;
  long hi = 1;  // inclusive
};
using StepsDistribution = std::variant<FixedSteps, UniformSteps>;

long draw_steps(const StepsDistribution& dist, Rng& rng);
void validate(const StepsDistribution& dist);

struct ChainConfig {
  double eps = 0.1;
  StepsDistribution steps = FixedSteps{1};
  long n_iterations = 1;
  std::uint64_t seed = 0;
  Vector init;
  long record_every = 1;  // thinning; positions stored at 0, k, 2k, ...
};

struct ChainOutput {
  std::vector<Vector> samples;  // thinned positions, including the init
  std::vector<bool> accepted;   // per iteration
  Vector delta_h;               // per iteration; +inf for diverged proposals
  double acceptance_rate = 0.0;
  long n_divergences = 0;
  long record_every = 1;  // carried so ESJD can reject thinned chains
};

struct IterationResult {
  Vector x;
  bool accepted = false;
  double delta_h = 0.0;
  bool diverged = false;
};

/// One transition of the Metropolis-adjusted HMC kernel: draw p ~ nu and
/// L ~ Psi, run the leapfrog trajectory, accept the endpoint with
/// probability 1 ^ exp(-delta H).  Divergent trajectories are rejected.
IterationResult hmc_iteration(const TargetPotential& target, const KineticEnergySpec& kin,
                              const Vector& x, const ChainConfig& cfg, Rng& rng);

/// Runs a chain from cfg.init.  Deterministic given cfg.seed (stream 0).
ChainOutput run_chain(const TargetPotential& target, const KineticEnergySpec& kin,
                      const ChainConfig& cfg);

/// n_chains independent chains with per-chain streams derived from
/// cfg.seed; chain j uses stream j, so run_replicates(..., 1) reproduces
/// run_chain exactly.  Chains may execute concurrently; output order is
/// the chain index regardless of scheduling.
std::vector<ChainOutput> run_replicates(const TargetPotential& target,
                                        const KineticEnergySpec& kin, const ChainConfig& cfg,
                                        std::size_t n_chains);

}  // namespace khmc
