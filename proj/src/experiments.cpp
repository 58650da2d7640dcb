#include "khmc/experiments.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>

#include "khmc/kinetics.hpp"
#include "khmc/parallel.hpp"
#include "khmc/targets.hpp"

namespace khmc {

namespace {

Vector linspace(double lo, double hi, long points) {
  Vector g;
  if (points == 1) {
    g.push_back(lo);
    return g;
  }
  for (long i = 0; i < points; ++i)
    g.push_back(lo + static_cast<double>(i) * (hi - lo) / static_cast<double>(points - 1));
  return g;
}

Vector geometric_grid(double lo, double factor, long points) {
  Vector g;
  double v = lo;
  for (long i = 0; i < points; ++i, v *= factor) g.push_back(v);
  return g;
}

ResultTable::Cell region_cell(const std::optional<long>& iters) {
  if (iters) return static_cast<long long>(*iters);
  return std::string("not-reached");
}

std::string trace_path(const std::string& out_dir, const std::string& stem,
                       const std::string& kinetic) {
  return (std::filesystem::path(out_dir) / (stem + "_" + kinetic + ".csv")).string();
}

ResultTable chain_trace_table(const ChainOutput& chain) {
  const std::size_t d = chain.samples.empty() ? 0 : chain.samples[0].size();
  std::vector<std::string> cols = {"iter"};
  for (std::size_t j = 0; j < d; ++j) cols.push_back("x" + std::to_string(j + 1));
  ResultTable t(cols);
  for (std::size_t i = 0; i < chain.samples.size(); ++i) {
    std::vector<ResultTable::Cell> row;
    row.emplace_back(static_cast<long long>(i) * chain.record_every);
    for (double v : chain.samples[i]) row.emplace_back(v);
    t.add_row(std::move(row));
  }
  return t;
}

std::vector<std::uint64_t> seeds_from(const Json& cfg, const std::string& context,
                                      std::vector<std::uint64_t> fallback,
                                      std::optional<std::uint64_t> override_seed) {
  if (override_seed) return {*override_seed};
  if (!cfg.contains("seeds")) return fallback;
  const Json& j = cfg.at("seeds");
  if (!j.is_array() || j.empty())
    throw ConfigError(context + ".seeds: expected a nonempty array of integers");
  std::vector<std::uint64_t> seeds;
  for (const auto& e : j) {
    if (!e.is_number_integer()) throw ConfigError(context + ".seeds: expected integers");
    seeds.push_back(e.get<std::uint64_t>());
  }
  return seeds;
}

}  // namespace

// ---------------------------------------------------------------------------
// Trade-off study

std::vector<TradeoffRow> tradeoff_study(const TradeoffSettings& settings) {
  const ExpPowerTarget target(1, settings.target_alpha);
  const GaussianKinetic gaussian(1);
  const RelativisticKinetic relativistic(1, 1.0, 1.0);
  const std::vector<const KineticEnergySpec*> kinetics = {&gaussian, &relativistic};

  Vector grid = settings.eps_grid;
  if (grid.empty()) grid = linspace(settings.grid_lo, settings.grid_hi, settings.grid_points);

  // Equilibrate once per kinetic; every grid chain starts from that state.
  std::vector<Vector> starts(kinetics.size());
  for (std::size_t k = 0; k < kinetics.size(); ++k) {
    ChainConfig burn;
    burn.eps = settings.burn_in_eps;
    burn.steps = UniformSteps{1, 5};
    burn.n_iterations = settings.burn_in;
    burn.seed = settings.seed;
    burn.init = {0.0};
    burn.record_every = settings.burn_in;  // only the endpoint is needed
    starts[k] = run_chain(target, *kinetics[k], burn).samples.back();
  }

  std::vector<TradeoffRow> rows(kinetics.size() * grid.size());
  parallel_for(rows.size(), [&](std::size_t idx) {
    const std::size_t k = idx / grid.size();
    const std::size_t g = idx % grid.size();
    ChainConfig cfg;
    cfg.eps = grid[g];
    cfg.steps = UniformSteps{1, 5};
    cfg.n_iterations = settings.chain_iterations;
    cfg.seed = settings.seed;
    cfg.init = starts[k];
    ChainOutput out = run_chain(target, *kinetics[k], cfg);
    rows[idx] = {kinetics[k]->name(), grid[g], expected_squared_jump_distance(out),
                 out.acceptance_rate};
  });
  return rows;
}

// ---------------------------------------------------------------------------
// Quantile regression study

namespace {

std::shared_ptr<KineticEnergySpec> quantile_kinetic(const std::string& name, std::size_t dim,
                                                    const QuantileSettings& s) {
  if (name == "gaussian") return std::make_shared<GaussianKinetic>(dim);
  if (name == "laplace") return std::make_shared<LaplaceKinetic>(dim, 1.0);
  if (name == "exponential_power")
    return std::make_shared<ExponentialPowerKinetic>(dim, s.ep_beta);
  if (name == "student_t") return std::make_shared<StudentTKinetic>(dim, s.student_dof);
  throw std::invalid_argument("quantile_study: unknown kinetic '" + name + "'");
}

}  // namespace

std::vector<QuantileRow> quantile_study(
    const QuantileSettings& settings,
    std::vector<std::pair<std::string, ChainOutput>>* far_traces,
    std::vector<std::pair<std::string, ChainOutput>>* mixing_traces) {
  const QuantileData data =
      simulate_quantile_data(settings.data_n, settings.beta_true, settings.data_seed);
  const QuantileRegressionTarget target(data, settings.tau, settings.sigma, settings.xi,
                                        settings.lambda, settings.q);
  const std::size_t m = target.dim();

  Vector grid = settings.tune_grid;
  if (grid.empty()) grid = geometric_grid(0.02, std::sqrt(2.0), 15);

  // Tuning and mixing run from the equilibrium-side start at the true
  // coefficients; convergence runs start far out along (1,...,1).
  Vector eq_init = settings.beta_true;
  eq_init.resize(m, 0.0);
  Vector far_init(m, settings.far_norm / std::sqrt(static_cast<double>(m)));

  std::vector<QuantileRow> rows(settings.kinetics.size());
  if (far_traces) far_traces->resize(settings.kinetics.size());
  if (mixing_traces) mixing_traces->resize(settings.kinetics.size());

  parallel_for(settings.kinetics.size(), [&](std::size_t k) {
    const auto kin = quantile_kinetic(settings.kinetics[k], m, settings);
    QuantileRow row;
    row.kinetic = settings.kinetics[k];

    ChainConfig tmpl;
    tmpl.steps = FixedSteps{1};
    tmpl.seed = settings.seed;
    tmpl.init = eq_init;
    tmpl.record_every = 1;
    tmpl.eps = grid.front();
    tmpl.n_iterations = settings.pilot_iterations;
    const StepSizeTuneResult tuned = step_size_grid_tune(
        target, *kin, tmpl, grid, settings.window, settings.pilot_iterations);
    row.tuned_eps = tuned.eps;
    row.tune_accept = tuned.acceptance;
    row.window_missed = tuned.window_missed;

    ChainConfig far_cfg = tmpl;
    far_cfg.eps = tuned.eps;
    far_cfg.init = far_init;
    far_cfg.n_iterations = settings.far_iterations;
    ChainOutput far_out = run_chain(target, *kin, far_cfg);
    row.far_accept = far_out.acceptance_rate;
    row.far_divergences = far_out.n_divergences;
    row.iterations_to_region =
        iterations_to_region(far_out, RegionNorm::Euclidean, settings.region_threshold);

    ChainConfig mix_cfg = tmpl;
    mix_cfg.eps = tuned.eps;
    mix_cfg.n_iterations = settings.mixing_iterations;
    ChainOutput mix_out = run_chain(target, *kin, mix_cfg);
    row.mixing_accept = mix_out.acceptance_rate;

    if (far_traces) (*far_traces)[k] = {row.kinetic, std::move(far_out)};
    if (mixing_traces) (*mixing_traces)[k] = {row.kinetic, std::move(mix_out)};
    rows[k] = std::move(row);
  });
  return rows;
}

// ---------------------------------------------------------------------------
// Ginzburg-Landau study

namespace {

std::shared_ptr<KineticEnergySpec> gl_kinetic(const std::string& name, std::size_t dim,
                                              const GlSettings& s) {
  if (name == "gaussian") return std::make_shared<GaussianKinetic>(dim);
  if (name == "relativistic_power")
    return std::make_shared<RelativisticPowerKinetic>(dim, s.power_beta, s.gamma);
  if (name == "relativistic") return std::make_shared<RelativisticKinetic>(dim, 1.0, 1.0);
  if (name == "exponential_power")
    return std::make_shared<ExponentialPowerKinetic>(dim, s.power_beta);
  throw std::invalid_argument("gl_study: unknown kinetic '" + name + "'");
}

}  // namespace

std::vector<GlRow> gl_study(const GlSettings& settings) {
  const GinzburgLandauTarget target(settings.side, settings.tau, settings.alpha,
                                    settings.lambda);
  const std::size_t d = target.dim();

  Vector grid = settings.tune_grid;
  if (grid.empty()) grid = geometric_grid(0.02, 1.5, 10);

  // One uniform far start per seed, shared by all kinetics.
  Vector far_init(d);
  {
    Rng rng(settings.seed, 777);
    for (double& v : far_init)
      v = rng.uniform(-settings.far_init_range, settings.far_init_range);
  }

  std::vector<GlRow> rows(settings.kinetics.size());
  parallel_for(settings.kinetics.size(), [&](std::size_t k) {
    const auto kin = gl_kinetic(settings.kinetics[k], d, settings);
    GlRow row;
    row.kinetic = settings.kinetics[k];

    // Equilibrate from the centre of the space at a conservative step.
    ChainConfig burn;
    burn.eps = settings.eq_burn_in_eps;
    burn.steps = FixedSteps{settings.leapfrog_steps};
    burn.n_iterations = settings.eq_burn_in;
    burn.seed = settings.seed;
    burn.init.assign(d, 0.0);
    burn.record_every = settings.eq_burn_in;
    const Vector eq_init = run_chain(target, *kin, burn).samples.back();

    // ESJD-optimal step size over the pilot grid.
    Vector esjd(grid.size(), 0.0);
    std::vector<char> usable(grid.size(), 0);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      ChainConfig pilot;
      pilot.eps = grid[g];
      pilot.steps = FixedSteps{settings.leapfrog_steps};
      pilot.n_iterations = settings.pilot_iterations;
      pilot.seed = settings.seed;
      pilot.init = eq_init;
      ChainOutput out = run_chain(target, *kin, pilot);
      esjd[g] = expected_squared_jump_distance(out);
      usable[g] = out.n_divergences < pilot.n_iterations;
    }
    long best = -1;
    for (std::size_t g = 0; g < grid.size(); ++g)
      if (usable[g] && (best < 0 || esjd[g] > esjd[best])) best = static_cast<long>(g);
    if (best < 0) throw std::runtime_error("gl_study: all tuning pilots diverged");
    row.tuned_eps = grid[best];

    ChainConfig ess_cfg;
    ess_cfg.eps = row.tuned_eps;
    ess_cfg.steps = FixedSteps{settings.leapfrog_steps};
    ess_cfg.n_iterations = settings.ess_iterations;
    ess_cfg.seed = settings.seed;
    ess_cfg.init = eq_init;
    ChainOutput ess_out = run_chain(target, *kin, ess_cfg);
    row.eq_accept = ess_out.acceptance_rate;
    ess_out.samples.erase(ess_out.samples.begin());  // drop the init
    row.ess = ess_summary(ess_out.samples);

    ChainConfig far_cfg = ess_cfg;
    far_cfg.init = far_init;
    far_cfg.n_iterations = settings.far_iterations;
    ChainOutput far_out = run_chain(target, *kin, far_cfg);
    row.far_accept = far_out.acceptance_rate;
    row.iterations_to_center = iterations_to_region(far_out, RegionNorm::SupCoordinate,
                                                    settings.center_threshold);
    rows[k] = std::move(row);
  });
  return rows;
}

// ---------------------------------------------------------------------------
// Command wrappers

void cmd_sample(const Json& config, const std::string& out_dir,
                std::optional<std::uint64_t> seed_override) {
  check_keys(config, "config", {"target", "kinetic", "chain"},
             {"target", "kinetic", "chain"});
  const auto target = make_target(config.at("target"));
  const auto kin = make_kinetic(config.at("kinetic"), target->dim());
  ChainConfig cfg = make_chain_config(config.at("chain"), target->dim());
  if (seed_override) cfg.seed = *seed_override;

  const auto t0 = std::chrono::steady_clock::now();
  ChainOutput out = run_chain(*target, *kin, cfg);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const EssSummary ess = ess_summary(out.samples);
  const double esjd = out.record_every == 1 ? expected_squared_jump_distance(out)
                                            : std::numeric_limits<double>::quiet_NaN();

  // Mean per-coordinate sample variance of the stored positions.
  double var_mean = 0.0;
  {
    const std::size_t d = target->dim();
    const std::size_t n = out.samples.size();
    for (std::size_t j = 0; j < d; ++j) {
      double m = 0.0;
      for (const auto& s : out.samples) m += s[j];
      m /= static_cast<double>(n);
      double v = 0.0;
      for (const auto& s : out.samples) v += (s[j] - m) * (s[j] - m);
      var_mean += v / static_cast<double>(n - 1);
    }
    var_mean /= static_cast<double>(d);
  }

  ResultTable summary({"acceptance_rate", "n_divergences", "ess_min", "ess_mean", "ess_max",
                       "esjd", "sample_var_mean", "wall_seconds", "seed"});
  summary.add_row({out.acceptance_rate, static_cast<long long>(out.n_divergences), ess.min,
                   ess.mean, ess.max, esjd, var_mean, wall, static_cast<long long>(cfg.seed)});

  chain_trace_table(out).write_csv(
      (std::filesystem::path(out_dir) / "samples.csv").string());
  summary.write_csv((std::filesystem::path(out_dir) / "summary.csv").string());
}

namespace {

Vector grid_from_config(const Json& j, const std::string& context) {
  if (j.is_array()) {
    Vector g;
    for (const auto& e : j) {
      if (!e.is_number()) throw ConfigError(context + ": expected numbers");
      g.push_back(e.get<double>());
    }
    return g;
  }
  check_keys(j, context, {"lo", "hi", "points"}, {"lo", "hi", "points"});
  return linspace(j.at("lo").get<double>(), j.at("hi").get<double>(),
                  j.at("points").get<long>());
}

}  // namespace

void cmd_tradeoff(const Json& config, const std::string& out_dir,
                  std::optional<std::uint64_t> seed_override) {
  check_keys(config, "config",
             {"target_alpha", "chain_iterations", "burn_in", "burn_in_eps", "eps_grid",
              "seeds"},
             {});
  TradeoffSettings s;
  if (config.contains("target_alpha")) s.target_alpha = config.at("target_alpha").get<double>();
  if (config.contains("chain_iterations"))
    s.chain_iterations = config.at("chain_iterations").get<long>();
  if (config.contains("burn_in")) s.burn_in = config.at("burn_in").get<long>();
  if (config.contains("burn_in_eps")) s.burn_in_eps = config.at("burn_in_eps").get<double>();
  if (config.contains("eps_grid")) s.eps_grid = grid_from_config(config.at("eps_grid"), "eps_grid");
  const auto seeds = seeds_from(config, "config", {1, 2, 3, 4, 5}, seed_override);

  ResultTable table({"seed", "kinetic", "eps", "esjd", "accept_rate"});
  for (std::uint64_t seed : seeds) {
    TradeoffSettings run = s;
    run.seed = seed;
    for (const TradeoffRow& r : tradeoff_study(run))
      table.add_row({static_cast<long long>(seed), r.kinetic, r.eps, r.esjd, r.accept_rate});
  }
  table.write_csv((std::filesystem::path(out_dir) / "tradeoff.csv").string());
}

void cmd_quantile(const Json& config, const std::string& out_dir,
                  std::optional<std::uint64_t> seed_override) {
  check_keys(config, "config",
             {"q", "tau", "sigma", "xi", "lambda", "data", "far_norm", "far_iterations",
              "mixing_iterations", "region_threshold", "tune", "kinetics", "ep_beta",
              "student_dof", "seeds", "write_traces"},
             {"q"});
  QuantileSettings s;
  s.q = config.at("q").get<double>();
  if (config.contains("tau")) s.tau = config.at("tau").get<double>();
  if (config.contains("sigma")) s.sigma = config.at("sigma").get<double>();
  if (config.contains("xi")) s.xi = config.at("xi").get<double>();
  if (config.contains("lambda")) s.lambda = config.at("lambda").get<double>();
  if (config.contains("data")) {
    check_keys(config.at("data"), "data", {"n", "beta_true", "seed"}, {});
    const Json& d = config.at("data");
    if (d.contains("n")) s.data_n = d.at("n").get<std::size_t>();
    if (d.contains("beta_true")) s.beta_true = d.at("beta_true").get<Vector>();
    if (d.contains("seed")) s.data_seed = d.at("seed").get<std::uint64_t>();
  }
  if (config.contains("far_norm")) s.far_norm = config.at("far_norm").get<double>();
  if (config.contains("far_iterations"))
    s.far_iterations = config.at("far_iterations").get<long>();
  if (config.contains("mixing_iterations"))
    s.mixing_iterations = config.at("mixing_iterations").get<long>();
  if (config.contains("region_threshold"))
    s.region_threshold = config.at("region_threshold").get<double>();
  if (config.contains("tune")) {
    const Json& t = config.at("tune");
    check_keys(t, "tune", {"grid", "pilot_iterations", "window"}, {});
    if (t.contains("grid")) s.tune_grid = grid_from_config(t.at("grid"), "tune.grid");
    if (t.contains("pilot_iterations"))
      s.pilot_iterations = t.at("pilot_iterations").get<long>();
    if (t.contains("window")) {
      const Vector w = t.at("window").get<Vector>();
      if (w.size() != 2) throw ConfigError("tune.window: expected [lo, hi]");
      s.window = {w[0], w[1]};
    }
  }
  if (config.contains("kinetics"))
    s.kinetics = config.at("kinetics").get<std::vector<std::string>>();
  if (config.contains("ep_beta")) s.ep_beta = config.at("ep_beta").get<double>();
  if (config.contains("student_dof")) s.student_dof = config.at("student_dof").get<double>();
  const bool write_traces =
      config.contains("write_traces") ? config.at("write_traces").get<bool>() : true;
  const auto seeds = seeds_from(config, "config", {1, 2, 3, 4, 5}, seed_override);

  ResultTable table({"seed", "kinetic", "tuned_eps", "tune_accept", "window_missed",
                     "far_accept", "far_divergences", "iterations_to_region",
                     "mixing_accept"});
  std::vector<std::pair<std::string, ChainOutput>> far_traces, mixing_traces;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    QuantileSettings run = s;
    run.seed = seeds[i];
    auto* far = (write_traces && i == 0) ? &far_traces : nullptr;
    auto* mix = (write_traces && i == 0) ? &mixing_traces : nullptr;
    for (const QuantileRow& r : quantile_study(run, far, mix))
      table.add_row({static_cast<long long>(seeds[i]), r.kinetic, r.tuned_eps, r.tune_accept,
                     static_cast<long long>(r.window_missed ? 1 : 0), r.far_accept,
                     static_cast<long long>(r.far_divergences),
                     region_cell(r.iterations_to_region), r.mixing_accept});
  }
  table.write_csv((std::filesystem::path(out_dir) / "quantile_summary.csv").string());
  for (const auto& [name, chain] : far_traces)
    chain_trace_table(chain).write_csv(trace_path(out_dir, "quantile_far", name));
  for (const auto& [name, chain] : mixing_traces)
    chain_trace_table(chain).write_csv(trace_path(out_dir, "quantile_mixing", name));
}

void cmd_ginzburg(const Json& config, const std::string& out_dir,
                  std::optional<std::uint64_t> seed_override) {
  check_keys(config, "config",
             {"side", "tau", "alpha", "lambda", "leapfrog_steps", "ess_iterations",
              "eq_burn_in", "eq_burn_in_eps", "far_iterations", "far_init_range",
              "center_threshold", "tune", "kinetics", "power_beta", "gamma", "seeds"},
             {});
  GlSettings s;
  if (config.contains("side")) s.side = config.at("side").get<std::size_t>();
  if (config.contains("tau")) s.tau = config.at("tau").get<double>();
  if (config.contains("alpha")) s.alpha = config.at("alpha").get<double>();
  if (config.contains("lambda")) s.lambda = config.at("lambda").get<double>();
  if (config.contains("leapfrog_steps"))
    s.leapfrog_steps = config.at("leapfrog_steps").get<long>();
  if (config.contains("ess_iterations"))
    s.ess_iterations = config.at("ess_iterations").get<long>();
  if (config.contains("eq_burn_in")) s.eq_burn_in = config.at("eq_burn_in").get<long>();
  if (config.contains("eq_burn_in_eps"))
    s.eq_burn_in_eps = config.at("eq_burn_in_eps").get<double>();
  if (config.contains("far_iterations"))
    s.far_iterations = config.at("far_iterations").get<long>();
  if (config.contains("far_init_range"))
    s.far_init_range = config.at("far_init_range").get<double>();
  if (config.contains("center_threshold"))
    s.center_threshold = config.at("center_threshold").get<double>();
  if (config.contains("tune")) {
    const Json& t = config.at("tune");
    check_keys(t, "tune", {"grid", "pilot_iterations"}, {});
    if (t.contains("grid")) s.tune_grid = grid_from_config(t.at("grid"), "tune.grid");
    if (t.contains("pilot_iterations"))
      s.pilot_iterations = t.at("pilot_iterations").get<long>();
  }
  if (config.contains("kinetics"))
    s.kinetics = config.at("kinetics").get<std::vector<std::string>>();
  if (config.contains("power_beta")) s.power_beta = config.at("power_beta").get<double>();
  if (config.contains("gamma")) s.gamma = config.at("gamma").get<double>();
  const auto seeds = seeds_from(config, "config", {1, 2, 3}, seed_override);

  ResultTable table({"seed", "kinetic", "tuned_eps", "ess_min", "ess_mean", "ess_max",
                     "eq_accept", "iterations_to_center", "far_accept"});
  for (std::uint64_t seed : seeds) {
    GlSettings run = s;
    run.seed = seed;
    for (const GlRow& r : gl_study(run))
      table.add_row({static_cast<long long>(seed), r.kinetic, r.tuned_eps, r.ess.min,
                     r.ess.mean, r.ess.max, r.eq_accept,
                     region_cell(r.iterations_to_center), r.far_accept});
  }
  table.write_csv((std::filesystem::path(out_dir) / "gl_summary.csv").string());
}

void cmd_probe(const std::string& subcommand, const Json& config, const std::string& out_dir,
               std::optional<std::uint64_t> seed_override) {
  if (subcommand == "period") {
    check_keys(config, "config", {"alpha", "beta", "energies"}, {"alpha", "beta"});
    const double alpha = config.at("alpha").get<double>();
    const double beta = config.at("beta").get<double>();
    Vector energies = config.contains("energies") ? config.at("energies").get<Vector>()
                                                  : Vector{0.1, 1.0, 10.0, 100.0};
    const PeriodResult res = period_exponent_fit(alpha, beta, energies);
    ResultTable table({"energy", "period", "eta_hat", "eta_analytic"});
    for (std::size_t i = 0; i < res.energies.size(); ++i)
      table.add_row({res.energies[i], res.periods[i], res.eta_hat, res.eta_analytic});
    table.write_csv((std::filesystem::path(out_dir) / "probe_period.csv").string());
    return;
  }
  if (subcommand == "growth") {
    check_keys(config, "config", {"target", "kinetic", "radii", "direction"},
               {"target", "kinetic"});
    const auto target = make_target(config.at("target"));
    const auto kin = make_kinetic(config.at("kinetic"), target->dim());
    Vector radii = config.contains("radii") ? config.at("radii").get<Vector>()
                                            : Vector{1.0, 10.0, 100.0, 1000.0, 10000.0};
    Vector direction = config.contains("direction") ? config.at("direction").get<Vector>()
                                                    : Vector(target->dim(), 1.0);
    const GrowthProbeResult res = growth_probe(*target, *kin, direction, radii);
    ResultTable table({"radius", "ratio", "slope", "classification"});
    for (std::size_t i = 0; i < res.radii.size(); ++i)
      table.add_row({res.radii[i], res.ratios[i], res.slope,
                     std::string(to_string(res.classification))});
    table.write_csv((std::filesystem::path(out_dir) / "probe_growth.csv").string());
    return;
  }
  if (subcommand == "negligible") {
    check_keys(config, "config",
               {"target", "kinetic", "eps", "steps", "delta", "radii", "direction",
                "n_trials", "seed"},
               {"target", "kinetic", "eps", "delta"});
    const auto target = make_target(config.at("target"));
    const auto kin = make_kinetic(config.at("kinetic"), target->dim());
    ChainConfig cfg;
    cfg.eps = config.at("eps").get<double>();
    cfg.steps = config.contains("steps") ? make_steps(config.at("steps"))
                                         : StepsDistribution(FixedSteps{1});
    cfg.init.assign(target->dim(), 0.0);
    cfg.n_iterations = 1;
    const double delta = config.at("delta").get<double>();
    Vector radii = config.contains("radii") ? config.at("radii").get<Vector>()
                                            : Vector{10.0, 100.0, 1000.0};
    Vector direction = config.contains("direction") ? config.at("direction").get<Vector>()
                                                    : Vector(target->dim(), 1.0);
    const double dn = norm2(direction);
    if (dn == 0.0) throw ConfigError("direction: must be nonzero");
    const long n_trials =
        config.contains("n_trials") ? config.at("n_trials").get<long>() : 1000;
    std::uint64_t seed = config.contains("seed") ? config.at("seed").get<std::uint64_t>() : 1;
    if (seed_override) seed = *seed_override;

    ResultTable table({"radius", "estimate", "std_error"});
    Rng rng(seed);
    for (double r : radii) {
      Vector x(target->dim());
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = r * direction[i] / dn;
      const NegligibleMoveEstimate est =
          negligible_move_probability(*target, *kin, x, delta, cfg, n_trials, rng);
      table.add_row({r, est.probability, est.std_error});
    }
    table.write_csv((std::filesystem::path(out_dir) / "probe_negligible.csv").string());
    return;
  }
  if (subcommand == "implicit-noise") {
    check_keys(config, "config", {"kinetic", "dim", "n", "seed"}, {"kinetic"});
    const std::size_t dim = config.contains("dim") ? config.at("dim").get<std::size_t>() : 1;
    const auto kin = make_kinetic(config.at("kinetic"), dim);
    const std::size_t n = config.contains("n") ? config.at("n").get<std::size_t>() : 10000;
    std::uint64_t seed = config.contains("seed") ? config.at("seed").get<std::uint64_t>() : 1;
    if (seed_override) seed = *seed_override;
    Rng rng(seed);
    const auto draws = implicit_noise_samples(*kin, n, rng);

    std::vector<std::string> cols = {"draw"};
    for (std::size_t j = 0; j < dim; ++j) cols.push_back("k" + std::to_string(j + 1));
    ResultTable table(cols);
    for (std::size_t i = 0; i < draws.size(); ++i) {
      std::vector<ResultTable::Cell> row;
      row.emplace_back(static_cast<long long>(i));
      for (double v : draws[i]) row.emplace_back(v);
      table.add_row(std::move(row));
    }
    table.write_csv((std::filesystem::path(out_dir) / "probe_implicit_noise.csv").string());
    return;
  }
  throw ConfigError("probe: unknown subcommand '" + subcommand + "'");
}

}  // namespace khmc
