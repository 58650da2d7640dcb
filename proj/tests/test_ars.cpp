#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "khmc/ars.hpp"
#include "support/stats.hpp"

using namespace khmc;
using khmc_test::ks_statistic;
using khmc_test::ks_threshold;

TEST_CASE("ars draws from a standard normal match direct draws") {
  const std::size_t n = 100000;
  ArsSampler sampler([](double p) { return -0.5 * p * p; }, [](double p) { return -p; },
                     -1.0, 1.0);
  Rng rng(101);
  std::vector<double> ars_draws(n), direct(n);
  for (double& v : ars_draws) v = sampler.sample(rng);
  Rng rng2(202);
  for (double& v : direct) v = rng2.normal();
  CHECK(ks_statistic(ars_draws, direct) < ks_threshold(n, n, 0.001));
}

TEST_CASE("non-log-concave inputs are rejected") {
  Rng rng(3);

  // A convex log density has no mode to bracket.
  CHECK_THROWS_AS(ars_sample([](double p) { return 0.5 * p * p; },
                             [](double p) { return p; }, {-1.0, 1.0}, rng),
                  ArsError);

  // Rippled density: the initial derivative signs bracket a local mode but
  // the function rises above the tangent hull elsewhere.
  auto bad = [&] {
    ArsSampler sampler([](double p) { return std::cos(3.0 * p); },
                       [](double p) { return -3.0 * std::sin(3.0 * p); }, -1.0, 1.0);
    for (int i = 0; i < 1000; ++i) sampler.sample(rng);
  };
  CHECK_THROWS_AS(bad(), ArsError);
}

TEST_CASE("failure to bracket the mode is reported") {
  // Both initial derivatives on the same side of the mode.
  CHECK_THROWS_AS(ArsSampler([](double p) { return -0.5 * (p - 10.0) * (p - 10.0); },
                             [](double p) { return -(p - 10.0); }, 1.0, 2.0),
                  ArsError);
  CHECK_NOTHROW(ars_bracket([](double p) { return -(p - 10.0); }, 1.0));
}

TEST_CASE("squeeze acceptance on the relativistic density after refinement") {
  // logdens = -(1 + p^2)^{1/2}.  Regression bound measured at first
  // implementation: squeeze acceptance ~0.99 after 20 refinements.
  ArsSampler sampler([](double p) { return -std::sqrt(1.0 + p * p); },
                     [](double p) { return -p / std::sqrt(1.0 + p * p); }, -1.0, 1.0);
  Rng rng(17);
  int guard = 0;
  while (sampler.refinements() < 20 && guard++ < 100000) sampler.sample(rng);
  REQUIRE(sampler.refinements() >= 20);

  sampler.reset_counters();
  for (int i = 0; i < 10000; ++i) sampler.sample(rng);
  const double squeeze_rate = static_cast<double>(sampler.squeeze_accepts()) /
                              static_cast<double>(sampler.proposals());
  CHECK(squeeze_rate > 0.5);
  CHECK(squeeze_rate > 0.9);  // regression bound, observed ~0.99
}

TEST_CASE("ars_sample free function draws with user-supplied bracket") {
  Rng rng(5);
  std::vector<double> draws(20000);
  for (double& v : draws)
    v = ars_sample([](double p) { return -std::abs(p) - 0.5 * p * p; },
                   [](double p) { return (p > 0 ? -1.0 : 1.0) - p; }, {-2.0, 2.0}, rng);
  // Symmetric density: mean near zero.
  CHECK(std::abs(khmc_test::mean(draws)) < 0.02);
}
