#include "khmc/hmc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "khmc/parallel.hpp"

namespace khmc {

long draw_steps(const StepsDistribution& dist, Rng& rng) {
  if (const auto* fixed = std::get_if<FixedSteps>(&dist)) return fixed->l;
  const auto& u = std::get<UniformSteps>(dist);
  return rng.uniform_int(u.lo, u.hi);
}

void validate(const StepsDistribution& dist) {
  if (const auto* fixed = std::get_if<FixedSteps>(&dist)) {
    if (fixed->l < 1) throw std::invalid_argument("StepsDistribution: L must be >= 1");
    return;
  }
  const auto& u = std::get<UniformSteps>(dist);
  if (u.lo < 1 || u.lo > u.hi)
    throw std::invalid_argument("StepsDistribution: need 1 <= lo <= hi");
}

namespace {

void validate_config(const TargetPotential& target, const KineticEnergySpec& kin,
                     const ChainConfig& cfg) {
  validate(cfg.steps);
  if (!(cfg.eps > 0.0)) throw std::invalid_argument("ChainConfig: eps must be positive");
  if (cfg.n_iterations < 1)
    throw std::invalid_argument("ChainConfig: n_iterations must be >= 1");
  if (cfg.record_every < 1)
    throw std::invalid_argument("ChainConfig: record_every must be >= 1");
  if (cfg.init.size() != target.dim())
    throw std::invalid_argument("ChainConfig: init dimension does not match target");
  if (target.dim() != kin.dim())
    throw std::invalid_argument("ChainConfig: target/kinetic dimension mismatch");
  if (!all_finite(cfg.init)) throw std::invalid_argument("ChainConfig: init not finite");
}

// Chain body shared by run_chain (stream 0) and run_replicates (stream j).
ChainOutput run_chain_stream(const TargetPotential& target, const KineticEnergySpec& kin,
                             const ChainConfig& cfg, std::uint64_t stream) {
  Rng rng(cfg.seed, stream);
  ChainOutput out;
  out.record_every = cfg.record_every;
  out.samples.reserve(static_cast<std::size_t>(cfg.n_iterations / cfg.record_every) + 1);
  out.accepted.reserve(cfg.n_iterations);
  out.delta_h.reserve(cfg.n_iterations);

  Vector x = cfg.init;
  out.samples.push_back(x);
  long n_accept = 0;
  for (long i = 1; i <= cfg.n_iterations; ++i) {
    IterationResult r = hmc_iteration(target, kin, x, cfg, rng);
    x = std::move(r.x);
    out.accepted.push_back(r.accepted);
    out.delta_h.push_back(r.delta_h);
    if (r.accepted) ++n_accept;
    if (r.diverged) ++out.n_divergences;
    if (i % cfg.record_every == 0) out.samples.push_back(x);
  }
  out.acceptance_rate = static_cast<double>(n_accept) / cfg.n_iterations;
  return out;
}

}  // namespace

IterationResult hmc_iteration(const TargetPotential& target, const KineticEnergySpec& kin,
                              const Vector& x, const ChainConfig& cfg, Rng& rng) {
  if (!all_finite(x)) throw std::invalid_argument("hmc_iteration: non-finite position");
  Vector p(kin.dim());
  kin.sample(rng, p);
  const long steps = draw_steps(cfg.steps, rng);
  TrajectoryRecord traj =
      leapfrog_trajectory(target, kin, PhasePoint(x, std::move(p)), cfg.eps, steps);
  // The accept draw is consumed unconditionally to keep the stream layout
  // independent of the trajectory outcome.
  const double u = rng.uniform();
  if (traj.diverged)
    return {x, false, std::numeric_limits<double>::infinity(), true};
  const bool accepted = traj.delta_h <= 0.0 || u < std::exp(-traj.delta_h);
  if (accepted) return {std::move(traj.final.x), true, traj.delta_h, false};
  return {x, false, traj.delta_h, false};
}

ChainOutput run_chain(const TargetPotential& target, const KineticEnergySpec& kin,
                      const ChainConfig& cfg) {
  validate_config(target, kin, cfg);
  return run_chain_stream(target, kin, cfg, 0);
}

std::vector<ChainOutput> run_replicates(const TargetPotential& target,
                                        const KineticEnergySpec& kin, const ChainConfig& cfg,
                                        std::size_t n_chains) {
  if (n_chains < 1) throw std::invalid_argument("run_replicates: n_chains must be >= 1");
  validate_config(target, kin, cfg);
  std::vector<ChainOutput> outputs(n_chains);
  parallel_for(n_chains,
               [&](std::size_t j) { outputs[j] = run_chain_stream(target, kin, cfg, j); });
  return outputs;
}

}  // namespace khmc
