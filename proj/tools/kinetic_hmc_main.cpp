#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "khmc/experiments.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = true) {
  auto* c = cmd->add_option("--config", opts.config_path, "JSON config file");
  if (config_required) c->required();
  cmd->add_option("--out", opts.out_dir, "output directory (default: .)");
  cmd->add_option("--seed", opts.seed, "override the config's seed(s)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamiltonian Monte Carlo with pluggable kinetic energies"};
  app.require_subcommand(1);

  CommonOpts sample_opts, quantile_opts, ginzburg_opts, tradeoff_opts, probe_opts;
  auto* sample = app.add_subcommand("sample", "run one chain, write samples.csv/summary.csv");
  add_common(sample, sample_opts);
  auto* quantile = app.add_subcommand("quantile", "quantile regression convergence study");
  add_common(quantile, quantile_opts);
  auto* ginzburg = app.add_subcommand("ginzburg", "Ginzburg-Landau lattice study");
  add_common(ginzburg, ginzburg_opts);
  auto* tradeoff = app.add_subcommand("tradeoff", "ESJD-versus-step-size study");
  add_common(tradeoff, tradeoff_opts);

  auto* probe = app.add_subcommand(
      "probe", "period | growth | negligible | implicit-noise diagnostics");
  std::string probe_sub;
  probe->add_option("subcommand", probe_sub, "period|growth|negligible|implicit-noise")
      ->required();
  add_common(probe, probe_opts, false);
  double probe_alpha = 0.0, probe_beta = 0.0;
  auto* alpha_opt = probe->add_option("--alpha", probe_alpha, "period probe: potential shape");
  auto* beta_opt = probe->add_option("--beta", probe_beta, "period probe: kinetic shape");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sample->parsed()) {
      khmc::cmd_sample(khmc::load_config_file(sample_opts.config_path), sample_opts.out_dir,
                       sample_opts.seed);
    } else if (quantile->parsed()) {
      khmc::cmd_quantile(khmc::load_config_file(quantile_opts.config_path),
                         quantile_opts.out_dir, quantile_opts.seed);
    } else if (ginzburg->parsed()) {
      khmc::cmd_ginzburg(khmc::load_config_file(ginzburg_opts.config_path),
                         ginzburg_opts.out_dir, ginzburg_opts.seed);
    } else if (tradeoff->parsed()) {
      khmc::cmd_tradeoff(khmc::load_config_file(tradeoff_opts.config_path),
                         tradeoff_opts.out_dir, tradeoff_opts.seed);
    } else if (probe->parsed()) {
      khmc::Json config;
      if (!probe_opts.config_path.empty())
        config = khmc::load_config_file(probe_opts.config_path);
      else
        config = khmc::Json::object();
      // Flag shorthand for the period probe.
      if (alpha_opt->count()) config["alpha"] = probe_alpha;
      if (beta_opt->count()) config["beta"] = probe_beta;
      khmc::cmd_probe(probe_sub, config, probe_opts.out_dir, probe_opts.seed);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
