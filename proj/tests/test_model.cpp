#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <memory>

#include "khmc/kinetics.hpp"
#include "khmc/model.hpp"
#include "khmc/targets.hpp"
#include "support/finite_difference.hpp"

using namespace khmc;
using khmc_test::central_fd_gradient;
using khmc_test::gradients_match;

namespace {

// Random point with coordinates in +-[0.1, 3]: inside every family's smooth
// region (the Laplace kink and the fractional-power origin are excluded).
Vector random_point(std::size_t dim, Rng& rng) {
  Vector x(dim);
  for (double& v : x) {
    v = rng.uniform(0.1, 3.0);
    if (rng.uniform() < 0.5) v = -v;
  }
  return x;
}

}  // namespace

TEST_CASE("PhasePoint validates dimensions and finiteness") {
  CHECK_NOTHROW(PhasePoint({1.0, 2.0}, {0.5, -0.5}));
  CHECK_THROWS_AS(PhasePoint({1.0, 2.0}, {0.5}), std::invalid_argument);
  CHECK_THROWS_AS(PhasePoint({std::nan("")}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(PhasePoint({0.0}, {std::numeric_limits<double>::infinity()}),
                  std::invalid_argument);
}

TEST_CASE("hamiltonian worked values") {
  const GaussianTarget quadratic(Vector{1.0});
  const GaussianKinetic gauss(1);

  CHECK(hamiltonian(quadratic, gauss, PhasePoint({0.0}, {0.0})) == 0.0);
  CHECK(hamiltonian(quadratic, gauss, PhasePoint({3.0}, {4.0})) == doctest::Approx(12.5));

  const ExpPowerTarget ep(1, 1.5);
  CHECK(hamiltonian(ep, gauss, PhasePoint({1.0}, {1.0})) ==
        doctest::Approx(1.0 / 1.5 + 0.5).epsilon(1e-12));
}

TEST_CASE("hamiltonian rejects dimension mismatch") {
  const GaussianTarget target(Vector{1.0, 1.0});
  const GaussianKinetic kin(1);
  CHECK_THROWS_AS(hamiltonian(target, kin, PhasePoint({0.0}, {0.0})), std::invalid_argument);
}

TEST_CASE("hamiltonian is invariant under momentum flip for every kinetic") {
  const std::size_t d = 3;
  const GaussianTarget target(Vector(d, 1.0));
  std::vector<std::shared_ptr<KineticEnergySpec>> kinetics = {
      std::make_shared<GaussianKinetic>(d),
      std::make_shared<LaplaceKinetic>(d, 1.0),
      std::make_shared<ExponentialPowerKinetic>(d, 3.0),
      std::make_shared<StudentTKinetic>(d, 4.0),
      std::make_shared<RelativisticKinetic>(d, 1.0, 1.0),
      std::make_shared<RelativisticPowerKinetic>(d, 4.0 / 3.0, 1.0),
  };
  Rng rng(11);
  for (const auto& kin : kinetics) {
    for (int i = 0; i < 20; ++i) {
      const Vector x = random_point(d, rng);
      const Vector p = random_point(d, rng);
      Vector neg = p;
      for (double& v : neg) v = -v;
      CHECK(hamiltonian(target, *kin, PhasePoint(x, p)) ==
            hamiltonian(target, *kin, PhasePoint(x, neg)));
    }
  }
}

TEST_CASE("Rng streams are reproducible and stream-separated") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());

  Rng s0(42, 0), s1(42, 1);
  bool identical = true;
  for (int i = 0; i < 32; ++i)
    if (s0.uniform() != s1.uniform()) identical = false;
  CHECK_FALSE(identical);

  Rng base(7);
  Rng d1 = base.derive(3);
  Rng d2 = Rng(7, 3);
  for (int i = 0; i < 32; ++i) CHECK(d1.uniform() == d2.uniform());
}

TEST_CASE("analytic gradients match finite differences for every target and kinetic") {
  // 100 random points per implementation, relative error <= 1e-5.
  Rng rng(2024);

  std::vector<std::pair<std::string, std::shared_ptr<TargetPotential>>> targets;
  targets.emplace_back("gaussian_diag", std::make_shared<GaussianTarget>(Vector{1.0, 2.5, 0.5}));
  {
    Matrix prec(2);
    prec(0, 0) = 2.0;
    prec(0, 1) = prec(1, 0) = 0.4;
    prec(1, 1) = 1.5;
    targets.emplace_back("gaussian_full", std::make_shared<GaussianTarget>(prec));
  }
  targets.emplace_back("exp_power", std::make_shared<ExpPowerTarget>(3, 1.5));
  targets.emplace_back("double_well", std::make_shared<DoubleWellTarget>(1.0, 1.0, 1.0));
  targets.emplace_back("funnel", std::make_shared<FunnelTarget>());
  {
    const QuantileData data = simulate_quantile_data(20, {1.0, -1.0}, 7);
    targets.emplace_back("quantile",
                         std::make_shared<QuantileRegressionTarget>(data, 0.5, 1.0, 0.01,
                                                                    1.0, 1.5));
  }
  targets.emplace_back("ginzburg_landau",
                       std::make_shared<GinzburgLandauTarget>(4, 2.0, 0.1, 0.5));
  targets.emplace_back(
      "noisy_zero_scale",
      std::shared_ptr<TargetPotential>(wrap_noisy(
          std::make_shared<GaussianTarget>(Vector{1.0, 1.0}), 0.0, Rng(5))));

  for (const auto& [name, target] : targets) {
    CAPTURE(name);
    auto f = [&](const Vector& x) { return target->evaluate(x); };
    for (int i = 0; i < 100; ++i) {
      const Vector x = random_point(target->dim(), rng);
      CHECK(gradients_match(target->gradient(x), central_fd_gradient(f, x)));
    }
  }

  const std::size_t d = 3;
  std::vector<std::pair<std::string, std::shared_ptr<KineticEnergySpec>>> kinetics;
  kinetics.emplace_back("gaussian", std::make_shared<GaussianKinetic>(Vector{1.0, 0.5, 2.0}));
  kinetics.emplace_back("laplace", std::make_shared<LaplaceKinetic>(d, 1.0));
  kinetics.emplace_back("exp_power_3", std::make_shared<ExponentialPowerKinetic>(d, 3.0));
  kinetics.emplace_back("exp_power_4_3",
                        std::make_shared<ExponentialPowerKinetic>(d, 4.0 / 3.0));
  kinetics.emplace_back("student_t", std::make_shared<StudentTKinetic>(d, 4.0));
  kinetics.emplace_back("relativistic", std::make_shared<RelativisticKinetic>(d, 1.0, 1.0));
  kinetics.emplace_back("relativistic_power",
                        std::make_shared<RelativisticPowerKinetic>(d, 4.0 / 3.0, 1.0));

  for (const auto& [name, kin] : kinetics) {
    CAPTURE(name);
    auto f = [&](const Vector& p) { return kin->evaluate(p); };
    for (int i = 0; i < 100; ++i) {
      const Vector p = random_point(d, rng);
      CHECK(gradients_match(kin->gradient(p), central_fd_gradient(f, p)));
    }
  }
}
