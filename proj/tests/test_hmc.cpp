#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <memory>

#include "khmc/hmc.hpp"
#include "khmc/kinetics.hpp"
#include "khmc/targets.hpp"
#include "support/stats.hpp"

using namespace khmc;
using khmc_test::ecdf;
using khmc_test::mean;
using khmc_test::quantile;
using khmc_test::variance;

namespace {

class FlatTarget final : public TargetPotential {
 public:
  explicit FlatTarget(std::size_t dim) : dim_(dim) {}
  std::size_t dim() const override { return dim_; }
  double evaluate(std::span<const double>) const override { return 0.0; }
  void gradient(std::span<const double>, std::span<double> out) const override {
    for (double& v : out) v = 0.0;
  }

 private:
  std::size_t dim_;
};

std::vector<double> first_coordinate(const ChainOutput& out) {
  std::vector<double> xs;
  xs.reserve(out.samples.size());
  for (const auto& s : out.samples) xs.push_back(s[0]);
  return xs;
}

}  // namespace

TEST_CASE("zero energy error is always accepted") {
  const FlatTarget target(1);
  const GaussianKinetic kin(1);
  ChainConfig cfg;
  cfg.eps = 0.5;
  cfg.steps = UniformSteps{1, 5};
  cfg.n_iterations = 200;
  cfg.seed = 1;
  cfg.init = {0.0};
  const ChainOutput out = run_chain(target, kin, cfg);
  CHECK(out.acceptance_rate == 1.0);
  for (double dh : out.delta_h) CHECK(dh == 0.0);
}

TEST_CASE("step size far beyond the stability limit is almost never accepted") {
  const GaussianTarget target(Vector{1.0});
  const GaussianKinetic kin(1);
  ChainConfig cfg;
  cfg.eps = 10.0;  // leapfrog on the unit harmonic oscillator is stable only below 2
  cfg.steps = UniformSteps{1, 5};
  cfg.n_iterations = 10000;
  cfg.seed = 2;
  cfg.init = {0.0};
  const ChainOutput out = run_chain(target, kin, cfg);
  CHECK(out.acceptance_rate < 0.05);
}

TEST_CASE("1-d Gaussian chain reproduces N(0,1) moments") {
  const GaussianTarget target(Vector{1.0});
  const GaussianKinetic kin(1);
  ChainConfig cfg;
  cfg.eps = 0.9;
  cfg.steps = UniformSteps{1, 5};
  cfg.n_iterations = 100000;
  cfg.seed = 3;
  cfg.init = {0.0};
  const ChainOutput out = run_chain(target, kin, cfg);
  const auto xs = first_coordinate(out);
  CHECK(std::abs(mean(xs)) < 0.05);
  CHECK(variance(xs) > 0.9);
  CHECK(variance(xs) < 1.1);
}

TEST_CASE("same seed gives bit-identical chains") {
  const GaussianTarget target(Vector{1.0});
  const StudentTKinetic kin(1, 4.0);
  ChainConfig cfg;
  cfg.eps = 0.7;
  cfg.steps = UniformSteps{1, 5};
  cfg.n_iterations = 500;
  cfg.seed = 11;
  cfg.init = {0.3};
  const ChainOutput a = run_chain(target, kin, cfg);
  const ChainOutput b = run_chain(target, kin, cfg);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) CHECK(a.samples[i][0] == b.samples[i][0]);
  CHECK(a.accepted == b.accepted);
  CHECK(a.delta_h == b.delta_h);
}

TEST_CASE("config validation") {
  const GaussianTarget target(Vector{1.0});
  const GaussianKinetic kin(1);
  ChainConfig cfg;
  cfg.eps = 0.5;
  cfg.init = {0.0};
  cfg.n_iterations = 0;
  CHECK_THROWS_AS(run_chain(target, kin, cfg), std::invalid_argument);
  cfg.n_iterations = 10;
  cfg.eps = -1.0;
  CHECK_THROWS_AS(run_chain(target, kin, cfg), std::invalid_argument);
  cfg.eps = 0.5;
  cfg.init = {0.0, 0.0};
  CHECK_THROWS_AS(run_chain(target, kin, cfg), std::invalid_argument);
  cfg.init = {0.0};
  cfg.steps = UniformSteps{3, 2};
  CHECK_THROWS_AS(run_chain(target, kin, cfg), std::invalid_argument);
}

TEST_CASE("thinning stores init plus every k-th iteration") {
  const GaussianTarget target(Vector{1.0});
  const GaussianKinetic kin(1);
  ChainConfig cfg;
  cfg.eps = 0.9;
  cfg.steps = FixedSteps{2};
  cfg.n_iterations = 100;
  cfg.seed = 5;
  cfg.init = {0.0};
  cfg.record_every = 10;
  const ChainOutput out = run_chain(target, kin, cfg);
  CHECK(out.samples.size() == 11);
  CHECK(out.accepted.size() == 100);
  CHECK(out.delta_h.size() == 100);
}

TEST_CASE("replicates") {
  const GaussianTarget target(Vector{1.0});
  const GaussianKinetic kin(1);
  ChainConfig cfg;
  cfg.eps = 0.9;
  cfg.steps = UniformSteps{1, 5};
  cfg.n_iterations = 2000;
  cfg.seed = 17;
  cfg.init = {0.0};

  SUBCASE("one replicate reproduces run_chain") {
    const auto reps = run_replicates(target, kin, cfg, 1);
    const ChainOutput direct = run_chain(target, kin, cfg);
    REQUIRE(reps.size() == 1);
    REQUIRE(reps[0].samples.size() == direct.samples.size());
    for (std::size_t i = 0; i < direct.samples.size(); ++i)
      CHECK(reps[0].samples[i][0] == direct.samples[i][0]);
  }

  SUBCASE("outputs are schedule-invariant") {
    setenv("KINETIC_HMC_THREADS", "1", 1);
    const auto serial = run_replicates(target, kin, cfg, 4);
    setenv("KINETIC_HMC_THREADS", "4", 1);
    const auto parallel = run_replicates(target, kin, cfg, 4);
    unsetenv("KINETIC_HMC_THREADS");
    for (std::size_t j = 0; j < 4; ++j) {
      REQUIRE(serial[j].samples.size() == parallel[j].samples.size());
      for (std::size_t i = 0; i < serial[j].samples.size(); ++i)
        CHECK(serial[j].samples[i][0] == parallel[j].samples[i][0]);
    }
  }

  SUBCASE("chains differ across replicate index") {
    const auto reps = run_replicates(target, kin, cfg, 2);
    bool differ = false;
    for (std::size_t i = 0; i < reps[0].samples.size() && !differ; ++i)
      differ = reps[0].samples[i][0] != reps[1].samples[i][0];
    CHECK(differ);
  }

  SUBCASE("replicated moment checks all pass") {
    ChainConfig long_cfg = cfg;
    long_cfg.n_iterations = 100000;
    const auto reps = run_replicates(target, kin, long_cfg, 10);
    for (const auto& rep : reps) {
      const auto xs = first_coordinate(rep);
      CHECK(std::abs(mean(xs)) < 0.05);
      CHECK(variance(xs) > 0.9);
      CHECK(variance(xs) < 1.1);
    }
  }
}

TEST_CASE("persistent divergence is tallied and rejected") {
  const ExpPowerTarget quartic(1, 4.0);
  const GaussianKinetic kin(1);
  ChainConfig cfg;
  cfg.eps = 1.0;
  cfg.steps = FixedSteps{10};
  cfg.n_iterations = 50;
  cfg.seed = 23;
  cfg.init = {50.0};
  const ChainOutput out = run_chain(quartic, kin, cfg);
  CHECK(out.n_divergences == 50);
  CHECK(out.acceptance_rate == 0.0);
  for (double dh : out.delta_h) CHECK(std::isinf(dh));
  CHECK(out.samples.back()[0] == 50.0);
}

TEST_CASE("every kinetic family leaves the target invariant") {
  // Empirical CDFs at five reference quantiles must agree with a long
  // Gaussian-kinetic reference chain within 0.02, for each of the three
  // 1-d targets and all six momentum families.
  std::vector<std::pair<std::string, std::shared_ptr<TargetPotential>>> targets = {
      {"gaussian", std::make_shared<GaussianTarget>(Vector{1.0})},
      {"exp_power_1.5", std::make_shared<ExpPowerTarget>(1, 1.5)},
      {"double_well", std::make_shared<DoubleWellTarget>(1.0, 1.0, 1.0)},
  };
  std::vector<std::pair<std::string, std::shared_ptr<KineticEnergySpec>>> kinetics = {
      {"gaussian", std::make_shared<GaussianKinetic>(1)},
      {"laplace", std::make_shared<LaplaceKinetic>(1, 1.0)},
      {"exp_power_3", std::make_shared<ExponentialPowerKinetic>(1, 3.0)},
      {"student_t_4", std::make_shared<StudentTKinetic>(1, 4.0)},
      {"relativistic", std::make_shared<RelativisticKinetic>(1, 1.0, 1.0)},
      {"relativistic_power", std::make_shared<RelativisticPowerKinetic>(1, 4.0 / 3.0, 1.0)},
  };
  const std::vector<double> probs = {0.1, 0.3, 0.5, 0.7, 0.9};

  for (const auto& [tname, target] : targets) {
    CAPTURE(tname);
    const double eps = tname == "double_well" ? 0.5 : 0.9;

    ChainConfig ref_cfg;
    ref_cfg.eps = 0.25;
    ref_cfg.steps = UniformSteps{1, 5};
    ref_cfg.n_iterations = 400000;
    ref_cfg.seed = 99;
    ref_cfg.init = {0.0};
    auto ref = first_coordinate(run_chain(*target, GaussianKinetic(1), ref_cfg));

    std::vector<double> points;
    for (double p : probs) points.push_back(quantile(ref, p));
    std::sort(ref.begin(), ref.end());

    for (const auto& [kname, kin] : kinetics) {
      CAPTURE(kname);
      ChainConfig cfg;
      cfg.eps = eps;
      cfg.steps = UniformSteps{1, 5};
      cfg.n_iterations = 200000;
      cfg.seed = 31;
      cfg.init = {0.0};
      if (kname == "laplace") {
        // Laplace-kinetic moves are exact multiples of eps, so the chain
        // lives on the lattice init + eps Z; a small step keeps the lattice
        // atoms (mass ~ eps pi(x)) inside the CDF tolerance.
        cfg.eps = 0.04;
        cfg.steps = UniformSteps{1, 15};
      }
      auto xs = first_coordinate(run_chain(*target, *kin, cfg));
      std::sort(xs.begin(), xs.end());
      for (std::size_t i = 0; i < points.size(); ++i) {
        CAPTURE(points[i]);
        CHECK(std::abs(ecdf(xs, points[i]) - ecdf(ref, points[i])) <= 0.02);
      }
    }
  }
}
