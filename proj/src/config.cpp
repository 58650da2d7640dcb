#include "khmc/config.hpp"

#include <fstream>
#include <set>

#include "khmc/kinetics.hpp"
#include "khmc/targets.hpp"

namespace khmc {

namespace {

double get_number(const Json& j, const std::string& context, const char* key,
                  std::optional<double> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(context + ": missing required key '" + key + "'");
  }
  if (!j.at(key).is_number())
    throw ConfigError(context + "." + key + ": expected a number");
  return j.at(key).get<double>();
}

long get_integer(const Json& j, const std::string& context, const char* key,
                 std::optional<long> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(context + ": missing required key '" + key + "'");
  }
  if (!j.at(key).is_number_integer())
    throw ConfigError(context + "." + key + ": expected an integer");
  return j.at(key).get<long>();
}

Vector get_vector(const Json& j, const std::string& context) {
  if (!j.is_array()) throw ConfigError(context + ": expected an array of numbers");
  Vector v;
  for (const auto& e : j) {
    if (!e.is_number()) throw ConfigError(context + ": expected an array of numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

Matrix get_matrix(const Json& j, const std::string& context) {
  if (!j.is_array() || j.empty() || !j.front().is_array())
    throw ConfigError(context + ": expected an array of arrays");
  Matrix m(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Vector row = get_vector(j.at(i), context);
    if (row.size() != m.n) throw ConfigError(context + ": matrix must be square");
    for (std::size_t k = 0; k < m.n; ++k) m(i, k) = row[k];
  }
  return m;
}

std::string get_string(const Json& j, const std::string& context, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string())
    throw ConfigError(context + ": missing string key '" + key + "'");
  return j.at(key).get<std::string>();
}

}  // namespace

Json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config parse error in ") + path + ": " + e.what());
  }
}

void check_keys(const Json& j, const std::string& context,
                std::initializer_list<const char*> allowed,
                std::initializer_list<const char*> required) {
  if (!j.is_object()) throw ConfigError(context + ": expected an object");
  const std::set<std::string> allow(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items())
    if (!allow.count(key)) throw ConfigError(context + ": unknown key '" + key + "'");
  for (const char* key : required)
    if (!j.contains(key)) throw ConfigError(context + ": missing required key '" + key + "'");
}

std::shared_ptr<TargetPotential> make_target(const Json& spec) {
  if (!spec.is_object()) throw ConfigError("target: expected an object");
  const std::string type = get_string(spec, "target", "type");

  if (type == "gaussian") {
    check_keys(spec, "target(gaussian)", {"type", "dim", "precision"}, {"type"});
    if (spec.contains("precision") && spec.at("precision").is_array() &&
        !spec.at("precision").empty() && spec.at("precision").front().is_array())
      return std::make_shared<GaussianTarget>(get_matrix(spec.at("precision"), "target.precision"));
    if (spec.contains("precision") && spec.at("precision").is_array())
      return std::make_shared<GaussianTarget>(get_vector(spec.at("precision"), "target.precision"));
    const long dim = get_integer(spec, "target(gaussian)", "dim", 1);
    const double prec = get_number(spec, "target(gaussian)", "precision", 1.0);
    return std::make_shared<GaussianTarget>(Vector(static_cast<std::size_t>(dim), prec));
  }
  if (type == "exp_power") {
    check_keys(spec, "target(exp_power)", {"type", "dim", "alpha"}, {"type", "alpha"});
    return std::make_shared<ExpPowerTarget>(
        static_cast<std::size_t>(get_integer(spec, "target(exp_power)", "dim", 1)),
        get_number(spec, "target(exp_power)", "alpha"));
  }
  if (type == "double_well") {
    check_keys(spec, "target(double_well)", {"type", "c", "a", "b"}, {"type"});
    return std::make_shared<DoubleWellTarget>(get_number(spec, "target(double_well)", "c", 1.0),
                                              get_number(spec, "target(double_well)", "a", 1.0),
                                              get_number(spec, "target(double_well)", "b", 1.0));
  }
  if (type == "funnel") {
    check_keys(spec, "target(funnel)", {"type"}, {"type"});
    return std::make_shared<FunnelTarget>();
  }
  if (type == "quantile_regression") {
    check_keys(spec, "target(quantile_regression)",
               {"type", "tau", "sigma", "xi", "lambda", "q", "data"}, {"type", "q"});
    QuantileData data;
    if (spec.contains("data") && spec.at("data").contains("csv")) {
      check_keys(spec.at("data"), "target.data", {"csv"}, {"csv"});
      data = load_quantile_csv(get_string(spec.at("data"), "target.data", "csv"));
    } else {
      Json d = spec.contains("data") ? spec.at("data") : Json::object();
      check_keys(d, "target.data", {"n", "beta_true", "seed"}, {});
      const long n = d.contains("n") ? get_integer(d, "target.data", "n") : 20;
      Vector beta_true = d.contains("beta_true")
                             ? get_vector(d.at("beta_true"), "target.data.beta_true")
                             : Vector{1.0, -1.0};
      const long seed = d.contains("seed") ? get_integer(d, "target.data", "seed") : 7;
      data = simulate_quantile_data(static_cast<std::size_t>(n), beta_true,
                                    static_cast<std::uint64_t>(seed));
    }
    return std::make_shared<QuantileRegressionTarget>(
        std::move(data), get_number(spec, "target", "tau", 0.5),
        get_number(spec, "target", "sigma", 1.0), get_number(spec, "target", "xi", 0.01),
        get_number(spec, "target", "lambda", 1.0), get_number(spec, "target", "q"));
  }
  if (type == "ginzburg_landau") {
    check_keys(spec, "target(ginzburg_landau)", {"type", "side", "tau", "alpha", "lambda"},
               {"type"});
    return std::make_shared<GinzburgLandauTarget>(
        static_cast<std::size_t>(get_integer(spec, "target(ginzburg_landau)", "side", 5)),
        get_number(spec, "target(ginzburg_landau)", "tau", 2.0),
        get_number(spec, "target(ginzburg_landau)", "alpha", 0.1),
        get_number(spec, "target(ginzburg_landau)", "lambda", 0.5));
  }
  if (type == "noisy") {
    check_keys(spec, "target(noisy)", {"type", "inner", "noise_scale", "noise_seed"},
               {"type", "inner", "noise_scale"});
    auto inner = make_target(spec.at("inner"));
    const double scale = get_number(spec, "target(noisy)", "noise_scale");
    const long seed = get_integer(spec, "target(noisy)", "noise_seed", 0);
    return std::make_shared<NoisyGradientWrapper>(std::move(inner), scale,
                                                  Rng(static_cast<std::uint64_t>(seed)));
  }
  throw ConfigError("target: unknown type '" + type + "'");
}

std::shared_ptr<KineticEnergySpec> make_kinetic(const Json& spec, std::size_t dim) {
  if (!spec.is_object()) throw ConfigError("kinetic: expected an object");
  const std::string family = get_string(spec, "kinetic", "family");

  if (family == "gaussian") {
    check_keys(spec, "kinetic(gaussian)", {"family", "inverse_mass"}, {"family"});
    if (!spec.contains("inverse_mass")) return std::make_shared<GaussianKinetic>(dim);
    const Json& im = spec.at("inverse_mass");
    if (im.is_number()) return std::make_shared<GaussianKinetic>(Vector(dim, im.get<double>()));
    if (im.is_array() && !im.empty() && im.front().is_array())
      return std::make_shared<GaussianKinetic>(get_matrix(im, "kinetic.inverse_mass"));
    return std::make_shared<GaussianKinetic>(get_vector(im, "kinetic.inverse_mass"));
  }
  if (family == "laplace") {
    check_keys(spec, "kinetic(laplace)", {"family", "scale"}, {"family"});
    return std::make_shared<LaplaceKinetic>(dim, get_number(spec, "kinetic(laplace)", "scale", 1.0));
  }
  if (family == "exponential_power") {
    check_keys(spec, "kinetic(exponential_power)", {"family", "beta"}, {"family", "beta"});
    return std::make_shared<ExponentialPowerKinetic>(
        dim, get_number(spec, "kinetic(exponential_power)", "beta"));
  }
  if (family == "student_t") {
    check_keys(spec, "kinetic(student_t)", {"family", "dof"}, {"family", "dof"});
    return std::make_shared<StudentTKinetic>(dim, get_number(spec, "kinetic(student_t)", "dof"));
  }
  if (family == "relativistic") {
    check_keys(spec, "kinetic(relativistic)", {"family", "mass", "speed"}, {"family"});
    return std::make_shared<RelativisticKinetic>(
        dim, get_number(spec, "kinetic(relativistic)", "mass", 1.0),
        get_number(spec, "kinetic(relativistic)", "speed", 1.0));
  }
  if (family == "relativistic_power") {
    check_keys(spec, "kinetic(relativistic_power)", {"family", "beta", "gamma"},
               {"family", "beta"});
    return std::make_shared<RelativisticPowerKinetic>(
        dim, get_number(spec, "kinetic(relativistic_power)", "beta"),
        get_number(spec, "kinetic(relativistic_power)", "gamma", 1.0));
  }
  throw ConfigError("kinetic: unknown family '" + family + "'");
}

StepsDistribution make_steps(const Json& spec) {
  if (spec.is_number_integer()) return FixedSteps{spec.get<long>()};
  if (!spec.is_object()) throw ConfigError("steps: expected an integer or an object");
  const std::string type = get_string(spec, "steps", "type");
  if (type == "fixed") {
    check_keys(spec, "steps(fixed)", {"type", "l"}, {"type", "l"});
    return FixedSteps{get_integer(spec, "steps", "l")};
  }
  if (type == "uniform") {
    check_keys(spec, "steps(uniform)", {"type", "lo", "hi"}, {"type", "lo", "hi"});
    return UniformSteps{get_integer(spec, "steps", "lo"), get_integer(spec, "steps", "hi")};
  }
  throw ConfigError("steps: unknown type '" + type + "'");
}

ChainConfig make_chain_config(const Json& spec, std::size_t dim) {
  check_keys(spec, "chain",
             {"eps", "steps", "n_iterations", "seed", "init", "record_every"},
             {"eps", "n_iterations"});
  ChainConfig cfg;
  cfg.eps = get_number(spec, "chain", "eps");
  cfg.n_iterations = get_integer(spec, "chain", "n_iterations");
  cfg.seed = static_cast<std::uint64_t>(get_integer(spec, "chain", "seed", 0));
  cfg.record_every = get_integer(spec, "chain", "record_every", 1);
  cfg.steps = spec.contains("steps") ? make_steps(spec.at("steps"))
                                     : StepsDistribution(FixedSteps{1});
  if (spec.contains("init")) {
    if (spec.at("init").is_number()) {
      cfg.init.assign(dim, spec.at("init").get<double>());
    } else {
      cfg.init = get_vector(spec.at("init"), "chain.init");
      if (cfg.init.size() != dim)
        throw ConfigError("chain.init: length does not match target dimension");
    }
  } else {
    cfg.init.assign(dim, 0.0);
  }
  validate(cfg.steps);
  return cfg;
}

}  // namespace khmc
