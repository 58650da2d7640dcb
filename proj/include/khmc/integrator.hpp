#pragma once

#include <stdexcept>

#include "khmc/model.hpp"

namespace khmc {

/// A leapfrog trajectory blew up: some coordinate went non-finite or
/// |x| exceeded the divergence bound.  step is the 0-based leapfrog step
/// at which the blow-up was detected.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, long step_)
      : std::runtime_error(what), step(step_) {}
  long step;
};

/// One leapfrog trajectory: endpoints, energy error and the step layout.
/// On divergence delta_h is +infinity and divergence_step records the
/// offending step.
struct TrajectoryRecord {
  PhasePoint initial;
  PhasePoint final;
  double delta_h = 0.0;  // H(final) - H(initial); +inf when diverged
  long steps = 0;
  double step_size = 0.0;
  bool diverged = false;
  long divergence_step = -1;
};

/// Single leapfrog (Stormer-Verlet) step:
///   p_half = p - (eps/2) grad U(x)
///   x'     = x + eps grad K(p_half)
///   p'     = p_half - (eps/2) grad U(x')
/// Throws DivergenceError if an intermediate goes non-finite.
PhasePoint leapfrog_step(const TargetPotential& target, const KineticEnergySpec& kin,
                         const PhasePoint& s, double eps);

/// L chained leapfrog steps with the position gradient cached between
/// steps, so the whole trajectory costs exactly L + 1 gradient evaluations.
/// Divergence is recorded in the result rather than thrown.
TrajectoryRecord leapfrog_trajectory(const TargetPotential& target,
                                     const KineticEnergySpec& kin, const PhasePoint& s,
                                     double eps, long steps);

}  // namespace khmc
