#include "khmc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "khmc/integrator.hpp"
#include "khmc/parallel.hpp"

namespace khmc {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void require_decades(const Vector& grid, const char* msg) {
  require(grid.size() >= 4, msg);
  double lo = grid[0], hi = grid[0];
  for (double v : grid) {
    require(v > 0.0, msg);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  require(hi / lo >= 999.0, msg);
}

}  // namespace

Vector composite_gradient(const TargetPotential& target, const KineticEnergySpec& kin,
                          std::span<const double> x) {
  if (x.size() != target.dim() || target.dim() != kin.dim())
    throw std::invalid_argument("composite_gradient: dimension mismatch");
  Vector gu(x.size());
  target.gradient(x, gu);
  Vector out(x.size());
  kin.gradient(gu, out);
  return out;
}

const char* to_string(GrowthClass c) {
  switch (c) {
    case GrowthClass::Sublinear: return "sublinear";
    case GrowthClass::Linear: return "linear";
    case GrowthClass::Superlinear: return "superlinear";
  }
  return "?";
}

GrowthProbeResult growth_probe(const TargetPotential& target, const KineticEnergySpec& kin,
                               Vector direction, const Vector& radii) {
  require_decades(radii, "growth_probe: need >= 4 positive radii spanning >= 3 decades");
  require(direction.size() == target.dim(), "growth_probe: direction dimension mismatch");
  const double dn = norm2(direction);
  require(dn > 0.0, "growth_probe: zero direction");
  for (double& v : direction) v /= dn;

  GrowthProbeResult res;
  res.radii = radii;
  Vector log_r, log_g;
  for (double r : radii) {
    Vector x(direction.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = r * direction[i];
    const double g = norm2(composite_gradient(target, kin, x));
    if (!(g > 0.0) || !std::isfinite(g))
      throw std::invalid_argument(
          "growth_probe: composite gradient vanished or diverged along the ray");
    res.ratios.push_back(g / r);
    log_r.push_back(std::log(r));
    log_g.push_back(std::log(g));
  }
  res.slope = least_squares_slope(log_r, log_g) - 1.0;
  if (res.slope < -0.1)
    res.classification = GrowthClass::Sublinear;
  else if (res.slope > 0.1)
    res.classification = GrowthClass::Superlinear;
  else
    res.classification = GrowthClass::Linear;
  return res;
}

NegligibleMoveEstimate negligible_move_probability(const TargetPotential& target,
                                                   const KineticEnergySpec& kin,
                                                   const Vector& x, double delta,
                                                   const ChainConfig& cfg, long n_trials,
                                                   Rng& rng) {
  require(delta > 0.0, "negligible_move_probability: delta must be positive");
  require(n_trials >= 100, "negligible_move_probability: need >= 100 trials");
  require(x.size() == target.dim(), "negligible_move_probability: dimension mismatch");
  long inside = 0;
  Vector p(kin.dim());
  for (long t = 0; t < n_trials; ++t) {
    kin.sample(rng, p);
    const long steps = draw_steps(cfg.steps, rng);
    TrajectoryRecord traj = leapfrog_trajectory(target, kin, PhasePoint(x, p), cfg.eps, steps);
    if (traj.diverged) continue;  // a blow-up is never a small move
    double dist_sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = traj.final.x[i] - x[i];
      dist_sq += d * d;
    }
    if (dist_sq < delta * delta) ++inside;
  }
  NegligibleMoveEstimate est;
  est.n_trials = n_trials;
  est.probability = static_cast<double>(inside) / n_trials;
  est.std_error = std::sqrt(est.probability * (1.0 - est.probability) / n_trials);
  return est;
}

double period_length(double alpha, double beta, double energy) {
  require(alpha > 1.0, "period_length: alpha must exceed 1");
  require(beta > 1.0, "period_length: beta must exceed 1");
  require(energy > 0.0, "period_length: energy must be positive");
  const double b = (1.0 - beta) / beta;  // in (-1, 0): integrable at y = 1
  // tanh-sinh handles the endpoint singularity; the two-argument form gives
  // the distance to the nearest endpoint so 1 - y^alpha stays accurate as
  // y -> 1.
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto f = [alpha, b](double y, double xc) {
    double one_minus_ya;
    if (y > 0.5)
      one_minus_ya = -std::expm1(alpha * std::log1p(-xc));  // xc = 1 - y here
    else
      one_minus_ya = 1.0 - std::pow(y, alpha);
    return std::pow(one_minus_ya, b);
  };
  const double integral = integrator.integrate(f, 0.0, 1.0, 1e-11);
  const double c_beta = std::pow(beta, b);
  const double c_alpha = std::pow(alpha, 1.0 / alpha);
  return 4.0 * c_beta * c_alpha * std::pow(energy, b + 1.0 / alpha) * integral;
}

PeriodResult period_exponent_fit(double alpha, double beta, const Vector& energies) {
  require_decades(energies, "period_exponent_fit: need >= 4 energies spanning >= 3 decades");
  PeriodResult res;
  res.alpha = alpha;
  res.beta = beta;
  res.energies = energies;
  Vector log_e, log_p;
  for (double e : energies) {
    const double p = period_length(alpha, beta, e);
    require(p > 0.0, "period_exponent_fit: nonpositive period");
    res.periods.push_back(p);
    log_e.push_back(std::log(e));
    log_p.push_back(std::log(p));
  }
  res.eta_hat = least_squares_slope(log_e, log_p);
  res.eta_analytic = (1.0 - (beta - 1.0) * (alpha - 1.0)) / (alpha * beta);
  return res;
}

double effective_sample_size(std::span<const double> series) {
  const std::size_t n = series.size();
  require(n >= 100, "effective_sample_size: need length >= 100");
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);

  auto autocov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t)
      s += (series[t] - mean) * (series[t + lag] - mean);
    return s / static_cast<double>(n);
  };

  const double c0 = autocov(0);
  if (!(c0 > 0.0)) throw std::invalid_argument("effective_sample_size: zero-variance series");

  // Geyer: sum pairs Gamma_m = c_{2m} + c_{2m+1} while positive, enforcing
  // monotone decrease.
  double pair_sum = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
    double g = autocov(2 * m) + autocov(2 * m + 1);
    if (g <= 0.0) break;
    g = std::min(g, prev);
    prev = g;
    pair_sum += g;
  }
  double var_estimate = -c0 + 2.0 * pair_sum;
  if (var_estimate <= 0.0) var_estimate = c0;
  double ess = static_cast<double>(n) * c0 / var_estimate;
  return std::clamp(ess, 1.0, static_cast<double>(n));
}

EssSummary ess_summary(const std::vector<Vector>& samples) {
  require(!samples.empty(), "ess_summary: empty sample list");
  const std::size_t d = samples[0].size();
  Vector per_coord(d);
  parallel_for(d, [&](std::size_t j) {
    Vector series(samples.size());
    for (std::size_t t = 0; t < samples.size(); ++t) series[t] = samples[t][j];
    per_coord[j] = effective_sample_size(series);
  });
  EssSummary s;
  s.min = *std::min_element(per_coord.begin(), per_coord.end());
  s.max = *std::max_element(per_coord.begin(), per_coord.end());
  s.mean = 0.0;
  for (double v : per_coord) s.mean += v;
  s.mean /= static_cast<double>(d);
  return s;
}

double expected_squared_jump_distance(const std::vector<Vector>& samples) {
  require(samples.size() >= 2, "expected_squared_jump_distance: need >= 2 samples");
  double total = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    double d_sq = 0.0;
    for (std::size_t j = 0; j < samples[i].size(); ++j) {
      const double d = samples[i][j] - samples[i - 1][j];
      d_sq += d * d;
    }
    total += d_sq;
  }
  return total / static_cast<double>(samples.size() - 1);
}

double expected_squared_jump_distance(const ChainOutput& chain) {
  if (chain.record_every != 1)
    throw std::invalid_argument(
        "expected_squared_jump_distance: chain was thinned; stored jumps are not "
        "per-iteration jumps");
  return expected_squared_jump_distance(chain.samples);
}

std::optional<long> iterations_to_region(const ChainOutput& chain, RegionNorm norm,
                                         double threshold) {
  if (!(threshold > 0.0))
    throw std::invalid_argument("iterations_to_region: threshold must be positive");
  for (std::size_t i = 0; i < chain.samples.size(); ++i) {
    const double v = norm == RegionNorm::SupCoordinate ? norm_inf(chain.samples[i])
                                                       : norm2(chain.samples[i]);
    if (v <= threshold) return static_cast<long>(i) * chain.record_every;
  }
  return std::nullopt;
}

StepSizeTuneResult step_size_grid_tune(const TargetPotential& target,
                                       const KineticEnergySpec& kin,
                                       const ChainConfig& cfg_template, const Vector& eps_grid,
                                       std::pair<double, double> accept_window,
                                       long pilot_iterations) {
  require(!eps_grid.empty(), "step_size_grid_tune: empty grid");
  require(accept_window.first > 0.0 && accept_window.second < 1.0 &&
              accept_window.first < accept_window.second,
          "step_size_grid_tune: window must be inside (0, 1)");
  require(pilot_iterations >= 1, "step_size_grid_tune: pilot_iterations must be >= 1");

  StepSizeTuneResult res;
  res.grid = eps_grid;
  res.grid_acceptance.assign(eps_grid.size(), 0.0);
  std::vector<char> usable(eps_grid.size(), 0);
  parallel_for(eps_grid.size(), [&](std::size_t i) {
    ChainConfig cfg = cfg_template;
    cfg.eps = eps_grid[i];
    cfg.n_iterations = pilot_iterations;
    ChainOutput out = run_chain(target, kin, cfg);
    res.grid_acceptance[i] = out.acceptance_rate;
    usable[i] = out.n_divergences < cfg.n_iterations;
  });

  if (std::none_of(usable.begin(), usable.end(), [](char u) { return u != 0; }))
    throw std::runtime_error("step_size_grid_tune: all pilots diverged");

  long best_in_window = -1;
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!usable[i]) continue;
    const double a = res.grid_acceptance[i];
    if (a >= accept_window.first && a <= accept_window.second) {
      if (best_in_window < 0 || eps_grid[i] > eps_grid[best_in_window])
        best_in_window = static_cast<long>(i);
    }
  }
  if (best_in_window >= 0) {
    res.eps = eps_grid[best_in_window];
    res.acceptance = res.grid_acceptance[best_in_window];
    return res;
  }

  res.window_missed = true;
  const double mid = 0.5 * (accept_window.first + accept_window.second);
  long best = -1;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!usable[i]) continue;
    const double d = std::abs(res.grid_acceptance[i] - mid);
    if (d < best_dist) {
      best_dist = d;
      best = static_cast<long>(i);
    }
  }
  res.eps = eps_grid[best];
  res.acceptance = res.grid_acceptance[best];
  return res;
}

}  // namespace khmc
