#pragma once

#include <optional>
#include <span>
#include <vector>

#include "khmc/hmc.hpp"
#include "khmc/model.hpp"

namespace khmc {

/// grad K applied to grad U: the map that governs leapfrog position moves
/// where the potential gradient dominates the momentum draw.
Vector composite_gradient(const TargetPotential& target, const KineticEnergySpec& kin,
                          std::span<const double> x);

enum class GrowthClass { Sublinear, Linear, Superlinear };

const char* to_string(GrowthClass c);

/// Log-log growth of |grad K o grad U(r d)| / r along a ray.  slope is the
/// fitted exponent minus one, so 0 means the composite gradient grows
/// linearly in |x|.  Classification thresholds are +-0.1 (an artifact
/// convention, not a paper value).
struct GrowthProbeResult {
  Vector radii;
  Vector ratios;  // |grad K o grad U(r d)| / r
  double slope = 0.0;
  GrowthClass classification = GrowthClass::Linear;
};

/// Requires >= 4 radii spanning >= 3 decades.  Throws if the composite
/// gradient vanishes along the ray (log-log fit undefined).
GrowthProbeResult growth_probe(const TargetPotential& target, const KineticEnergySpec& kin,
                               Vector direction, const Vector& radii);

struct NegligibleMoveEstimate {
  double probability = 0.0;  // fraction of proposals landing in B_delta(x)
  double std_error = 0.0;
  long n_trials = 0;
};

/// Monte Carlo probe of the negligible-moves behaviour at a fixed point:
/// n_trials independent HMC proposals from x (fresh momentum and L each
/// trial), counting the fraction whose trajectory endpoint lies within
/// delta of x.  Divergent trajectories count as escaping the ball.
NegligibleMoveEstimate negligible_move_probability(const TargetPotential& target,
                                                   const KineticEnergySpec& kin,
                                                   const Vector& x, double delta,
                                                   const ChainConfig& cfg, long n_trials,
                                                   Rng& rng);

/// Period of the 1-d flow with H = |x|^alpha/alpha + |p|^beta/beta at
/// energy E:
///   P(E) = 4 beta^{(1-beta)/beta} alpha^{1/alpha} E^{(1-beta)/beta + 1/alpha}
///          * int_0^1 (1 - y^alpha)^{(1-beta)/beta} dy,
/// evaluated by quadrature that handles the integrable singularity at
/// y = 1; relative error <= 1e-8.
double period_length(double alpha, double beta, double energy);

struct PeriodResult {
  double alpha = 0.0, beta = 0.0;
  Vector energies;
  Vector periods;
  double eta_hat = 0.0;       // fitted log-log slope of P(E) vs E
  double eta_analytic = 0.0;  // (1 - (beta-1)(alpha-1)) / (alpha beta)
};

/// Fits the period-law exponent over >= 4 energies spanning >= 3 decades.
PeriodResult period_exponent_fit(double alpha, double beta, const Vector& energies);

/// Effective sample size n / (1 + 2 sum rho_k) with the autocovariance sum
/// truncated by Geyer's initial monotone positive-pairs rule; clipped to
/// [1, n].  Requires length >= 100; throws on a zero-variance series.
double effective_sample_size(std::span<const double> series);

struct EssSummary {
  double min = 0.0, mean = 0.0, max = 0.0;
};

/// Per-coordinate ESS summary of a stored sample list.
EssSummary ess_summary(const std::vector<Vector>& samples);

/// Mean of |x_i - x_{i-1}|^2 over consecutive samples.
double expected_squared_jump_distance(const std::vector<Vector>& samples);

/// ChainOutput overload; rejects thinned chains (record_every > 1), whose
/// stored jumps are not per-iteration jumps.
double expected_squared_jump_distance(const ChainOutput& chain);

enum class RegionNorm { SupCoordinate, Euclidean };

/// First iteration whose stored position has norm <= threshold, in
/// iteration units (stored index times record_every); nullopt if the chain
/// never enters the region.
std::optional<long> iterations_to_region(const ChainOutput& chain, RegionNorm norm,
                                         double threshold);

struct StepSizeTuneResult {
  double eps = 0.0;
  double acceptance = 0.0;   // pilot acceptance at the chosen eps
  bool window_missed = false;
  Vector grid;               // the eps grid, in input order
  Vector grid_acceptance;    // pilot acceptance per grid point
};

/// Short pilot chains from the template's (equilibrium) init at each grid
/// eps; returns the largest eps whose acceptance falls inside the window,
/// or the one nearest the window midpoint with window_missed set.  Throws
/// if every pilot diverges on every iteration.
StepSizeTuneResult step_size_grid_tune(const TargetPotential& target,
                                       const KineticEnergySpec& kin,
                                       const ChainConfig& cfg_template, const Vector& eps_grid,
                                       std::pair<double, double> accept_window = {0.65, 0.75},
                                       long pilot_iterations = 2000);

}  // namespace khmc
