#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "khmc/config.hpp"
#include "khmc/diagnostics.hpp"
#include "khmc/table.hpp"

namespace khmc {

// ---------------------------------------------------------------------------
// Efficiency-robustness trade-off: ESJD versus step size on the 1-d
// exponential-power target, quadratic versus relativistic momentum.

struct TradeoffSettings {
  double target_alpha = 1.5;
  long chain_iterations = 20000;
  long burn_in = 1000;       // equilibration from 0, discarded
  double burn_in_eps = 0.5;
  Vector eps_grid;           // empty: evenly spaced grid below
  long grid_points = 20;
  double grid_lo = 0.1;
  double grid_hi = 5.0;
  std::uint64_t seed = 1;
};

struct TradeoffRow {
  std::string kinetic;
  double eps = 0.0;
  double esjd = 0.0;
  double accept_rate = 0.0;
};

std::vector<TradeoffRow> tradeoff_study(const TradeoffSettings& settings);

// ---------------------------------------------------------------------------
// Quantile regression convergence/mixing study: four momentum choices,
// one leapfrog step, step size tuned to the acceptance window at
// equilibrium, convergence assessed from a far-tail start.

struct QuantileSettings {
  double q = 2.0;
  double tau = 0.5, sigma = 1.0, xi = 0.01, lambda = 1.0;
  std::size_t data_n = 20;
  Vector beta_true = {1.0, -1.0};
  std::uint64_t data_seed = 7;
  // Far enough out that the L_q prior gradient dominates the bounded loss
  // gradient, the regime where the composite-gradient analysis bites.
  double far_norm = 1000.0;  // start at far_norm * (1,...,1)/sqrt(m)
  long far_iterations = 200000;
  long mixing_iterations = 10000;
  double region_threshold = 5.0;  // Euclidean
  Vector tune_grid;               // empty: geometric default
  std::pair<double, double> window = {0.65, 0.75};
  long pilot_iterations = 2000;
  std::vector<std::string> kinetics = {"exponential_power", "gaussian", "laplace",
                                       "student_t"};
  double ep_beta = 3.0;
  double student_dof = 4.0;
  std::uint64_t seed = 1;
};

struct QuantileRow {
  std::string kinetic;
  double tuned_eps = 0.0;
  double tune_accept = 0.0;
  bool window_missed = false;
  double far_accept = 0.0;
  long far_divergences = 0;
  std::optional<long> iterations_to_region;
  double mixing_accept = 0.0;
};

/// Traces (far-start and equilibrium-start chains per kinetic) are returned
/// only when the out-params are non-null.
std::vector<QuantileRow> quantile_study(
    const QuantileSettings& settings,
    std::vector<std::pair<std::string, ChainOutput>>* far_traces = nullptr,
    std::vector<std::pair<std::string, ChainOutput>>* mixing_traces = nullptr);

// ---------------------------------------------------------------------------
// Ginzburg-Landau lattice study: equilibrium ESS and iterations until the
// field enters max|psi| <= threshold from a uniform far start.  Step sizes
// are chosen by ESJD over a pilot grid (a cheap stand-in for ESS-optimal
// selection).

struct GlSettings {
  std::size_t side = 5;
  double tau = 2.0, alpha = 0.1, lambda = 0.5;
  long leapfrog_steps = 10;
  long ess_iterations = 10000;
  long eq_burn_in = 1000;
  double eq_burn_in_eps = 0.05;
  long far_iterations = 3000;
  double far_init_range = 10.0;  // psi ~ U[-range, range]
  double center_threshold = 2.0;
  Vector tune_grid;  // empty: default grid
  long pilot_iterations = 1000;
  std::vector<std::string> kinetics = {"gaussian", "relativistic_power", "relativistic",
                                       "exponential_power"};
  double power_beta = 4.0 / 3.0;  // shape for both power families
  double gamma = 1.0;             // relativistic-power tuning parameter
  std::uint64_t seed = 1;
};

struct GlRow {
  std::string kinetic;
  double tuned_eps = 0.0;
  EssSummary ess;
  double eq_accept = 0.0;
  std::optional<long> iterations_to_center;
  double far_accept = 0.0;
};

std::vector<GlRow> gl_study(const GlSettings& settings);

// ---------------------------------------------------------------------------
// CLI commands.  Each parses/validates its config, computes, then writes
// CSVs atomically; nothing is written when validation or computation fails.
// seed_override, when set, replaces the config's seed list.

void cmd_sample(const Json& config, const std::string& out_dir,
                std::optional<std::uint64_t> seed_override = std::nullopt);
void cmd_quantile(const Json& config, const std::string& out_dir,
                  std::optional<std::uint64_t> seed_override = std::nullopt);
void cmd_ginzburg(const Json& config, const std::string& out_dir,
                  std::optional<std::uint64_t> seed_override = std::nullopt);
void cmd_tradeoff(const Json& config, const std::string& out_dir,
                  std::optional<std::uint64_t> seed_override = std::nullopt);
void cmd_probe(const std::string& subcommand, const Json& config, const std::string& out_dir,
               std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace khmc
