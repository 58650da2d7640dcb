#include "khmc/integrator.hpp"

#include <cmath>
#include <limits>

namespace khmc {

namespace {

constexpr double kDivergenceNorm = 1e100;

bool blown_up(const Vector& v) {
  return !all_finite(v) || norm2(v) > kDivergenceNorm;
}

// Runs the shared trajectory loop.  Returns the 0-based step index at which
// divergence was detected, or -1 on success.
long run_leapfrog(const TargetPotential& target, const KineticEnergySpec& kin, Vector& x,
                  Vector& p, double eps, long steps) {
  const std::size_t d = x.size();
  Vector grad_u(d), grad_k(d);
  target.gradient(x, grad_u);
  for (long step = 0; step < steps; ++step) {
    for (std::size_t i = 0; i < d; ++i) p[i] -= 0.5 * eps * grad_u[i];
    if (!all_finite(p)) return step;
    kin.gradient(p, grad_k);
    for (std::size_t i = 0; i < d; ++i) x[i] += eps * grad_k[i];
    if (blown_up(x)) return step;
    target.gradient(x, grad_u);  // reused as the next step's first half-kick
    if (!all_finite(grad_u)) return step;
    for (std::size_t i = 0; i < d; ++i) p[i] -= 0.5 * eps * grad_u[i];
    if (!all_finite(p)) return step;
  }
  return -1;
}

void check_preconditions(const TargetPotential& target, const KineticEnergySpec& kin,
                         const PhasePoint& s, double eps) {
  if (s.dim() != target.dim() || s.dim() != kin.dim())
    throw std::invalid_argument("leapfrog: dimension mismatch");
  if (!(eps > 0.0)) throw std::invalid_argument("leapfrog: eps must be positive");
}

}  // namespace

PhasePoint leapfrog_step(const TargetPotential& target, const KineticEnergySpec& kin,
                         const PhasePoint& s, double eps) {
  check_preconditions(target, kin, s, eps);
  Vector x = s.x, p = s.p;
  const long bad_step = run_leapfrog(target, kin, x, p, eps, 1);
  if (bad_step >= 0) throw DivergenceError("leapfrog_step: trajectory diverged", bad_step);
  return PhasePoint(std::move(x), std::move(p));
}

TrajectoryRecord leapfrog_trajectory(const TargetPotential& target,
                                     const KineticEnergySpec& kin, const PhasePoint& s,
                                     double eps, long steps) {
  check_preconditions(target, kin, s, eps);
  if (steps < 1) throw std::invalid_argument("leapfrog_trajectory: steps must be >= 1");

  Vector x = s.x, p = s.p;
  const double h0 = target.evaluate(s.x) + kin.evaluate(s.p);
  const long bad_step = run_leapfrog(target, kin, x, p, eps, steps);

  if (bad_step >= 0) {
    TrajectoryRecord rec{s, s, std::numeric_limits<double>::infinity(), steps, eps, true,
                         bad_step};
    return rec;
  }

  PhasePoint final(std::move(x), std::move(p));
  double dh = target.evaluate(final.x) + kin.evaluate(final.p) - h0;
  TrajectoryRecord rec{s, std::move(final), dh, steps, eps, false, -1};
  if (!std::isfinite(dh)) {
    // Energy overflowed even though coordinates stayed finite.
    rec.delta_h = std::numeric_limits<double>::infinity();
    rec.diverged = true;
    rec.divergence_step = steps - 1;
  }
  return rec;
}

}  // namespace khmc
