#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "khmc/targets.hpp"
#include "support/finite_difference.hpp"
#include "support/stats.hpp"

using namespace khmc;

namespace {

// Exact pinball loss rho_tau(u) = u (tau - 1{u < 0}); the smoothing oracle.
double pinball(double u, double tau) { return u * (tau - (u < 0.0 ? 1.0 : 0.0)); }

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "khmc_targets_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("smoothed pinball loss worked values") {
  const double tau = 0.5, sigma = 1.0, xi = 0.01;
  const double g = smoothed_pinball_constant(tau, sigma, xi);

  // y = mu: exponent is zero, so the loss is g + xi log 2.
  CHECK(smoothed_pinball_loss(1.0, 1.0, tau, sigma, xi) ==
        doctest::Approx(g + xi * std::log(2.0)).epsilon(1e-12));

  // Far from the kink the smoothing is negligible: exact pinball recovered.
  CHECK(smoothed_pinball_loss(5.0, 0.0, tau, sigma, xi) - g ==
        doctest::Approx(pinball(5.0, tau)).epsilon(1e-6));
  CHECK(smoothed_pinball_loss(-5.0, 0.0, tau, sigma, xi) - g ==
        doctest::Approx(pinball(-5.0, tau)).epsilon(1e-6));

  // Overflow safety at extreme arguments.
  CHECK(std::isfinite(smoothed_pinball_loss(1e8, 0.0, tau, sigma, xi)));
  CHECK(std::isfinite(smoothed_pinball_loss(-1e8, 0.0, tau, sigma, xi)));

  // Asymmetric quantile, against the exact pinball oracle on a grid.
  for (double u : {-4.0, -1.0, 1.0, 4.0})
    CHECK(smoothed_pinball_loss(u, 0.0, 0.25, sigma, xi) -
              smoothed_pinball_constant(0.25, sigma, xi) ==
          doctest::Approx(pinball(u, 0.25)).epsilon(1e-4));

  CHECK_THROWS_AS(smoothed_pinball_loss(0.0, 0.0, 1.5, 1.0, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(smoothed_pinball_loss(0.0, 0.0, 0.5, -1.0, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(smoothed_pinball_loss(0.0, 0.0, 0.5, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("potential worked values") {
  SUBCASE("ginzburg-landau zero field") {
    const GinzburgLandauTarget gl(3, 2.0, 0.1, 0.5);
    const Vector psi(gl.dim(), 0.0);
    CHECK(gl.evaluate(psi) == 0.0);
    for (double g : gl.gradient(psi)) CHECK(g == 0.0);
  }
  SUBCASE("double well stationary points") {
    const DoubleWellTarget dw(1.0, 1.0, 1.0);
    const double root = 1.0 / std::sqrt(2.0);
    CHECK(dw.gradient(Vector{root})[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(dw.gradient(Vector{-root})[0] == doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("funnel at the origin") {
    const FunnelTarget funnel;
    const Vector origin(10, 0.0);
    CHECK(funnel.evaluate(origin) == 0.0);
    CHECK(funnel.gradient(origin)[9] == doctest::Approx(4.5));
  }
}

TEST_CASE("funnel x-gradient grows like exp(-v) into the neck") {
  const FunnelTarget funnel;
  Vector a(10, 0.0), b(10, 0.0);
  a[0] = b[0] = 1.0;
  a[9] = -5.0;
  b[9] = -10.0;
  const double ratio = funnel.gradient(b)[0] / funnel.gradient(a)[0];
  CHECK(ratio == doctest::Approx(std::exp(5.0)).epsilon(1e-6));
}

TEST_CASE("quantile regression prior dominates the loss gradient in the tails") {
  const QuantileData data = simulate_quantile_data(20, {1.0, -1.0}, 7);
  SUBCASE("q = 2 at |beta_j| = 1e4") {
    const QuantileRegressionTarget target(data, 0.5, 1.0, 0.01, 1.0, 2.0);
    Vector beta = {1e4, 0.0};
    const double ratio = std::abs(target.gradient(beta)[0]) / std::pow(1e4, 1.0);
    CHECK(ratio == doctest::Approx(2.0).epsilon(1e-2));  // lambda q = 2
  }
  SUBCASE("q = 1.5 far enough out that the bounded loss term washes out") {
    const QuantileRegressionTarget target(data, 0.5, 1.0, 0.01, 1.0, 1.5);
    Vector beta = {1e8, 0.0};
    const double ratio = std::abs(target.gradient(beta)[0]) / std::pow(1e8, 0.5);
    CHECK(ratio == doctest::Approx(1.5).epsilon(1e-2));  // lambda q = 1.5
  }
}

TEST_CASE("ginzburg-landau gradient at a constant field has no coupling term") {
  const double tau = 2.0, alpha = 0.1, lambda = 0.5, c = 1.7;
  const GinzburgLandauTarget gl(4, tau, alpha, lambda);
  const Vector psi(gl.dim(), c);
  const double expected = (1.0 - tau) * c + tau * lambda * c * c * c;
  for (double g : gl.gradient(psi)) CHECK(g == doctest::Approx(expected).epsilon(1e-14));
  const double site = 0.5 * (1.0 - tau) * c * c + 0.25 * tau * lambda * c * c * c * c;
  CHECK(gl.evaluate(psi) == doctest::Approx(site * static_cast<double>(gl.dim())));
}

TEST_CASE("noisy gradient wrapper") {
  auto inner = std::make_shared<GaussianTarget>(Vector{1.0, 2.0});
  const Vector x = {0.7, -1.3};

  SUBCASE("zero noise is bit-identical to the inner gradient") {
    NoisyGradientWrapper wrapped(inner, 0.0, Rng(9));
    const Vector a = wrapped.gradient(x);
    const Vector b = inner->gradient(x);
    CHECK(a[0] == b[0]);
    CHECK(a[1] == b[1]);
  }
  SUBCASE("noise is zero-mean: CLT bound on the gradient average") {
    const double scale = 0.5;
    const std::size_t n = 100000;
    NoisyGradientWrapper wrapped(inner, scale, Rng(9));
    Vector sum(2, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const Vector g = wrapped.gradient(x);
      sum[0] += g[0];
      sum[1] += g[1];
    }
    const Vector exact = inner->gradient(x);
    const double bound = 4.0 * scale / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(sum[0] / n - exact[0]) < bound);
    CHECK(std::abs(sum[1] / n - exact[1]) < bound);
  }
  SUBCASE("evaluate is exact regardless of noise scale") {
    NoisyGradientWrapper wrapped(inner, 3.0, Rng(9));
    CHECK(wrapped.evaluate(x) == inner->evaluate(x));
  }
  SUBCASE("negative scale rejected") {
    CHECK_THROWS_AS(NoisyGradientWrapper(inner, -0.1, Rng(9)), std::invalid_argument);
  }
}

TEST_CASE("quantile CSV loader") {
  const auto dir = temp_dir();
  const auto path = (dir / "qr.csv").string();
  {
    std::ofstream out(path);
    out << "y,x1,x2\n1.5,0.3,-0.2\n-0.5,1.0,2.0\n";
  }
  const QuantileData data = load_quantile_csv(path);
  REQUIRE(data.responses.size() == 2);
  CHECK(data.responses[0] == 1.5);
  CHECK(data.covariates[1][1] == 2.0);

  {
    std::ofstream out(path);
    out << "y,cov1\n1.0,2.0\n";
  }
  CHECK_THROWS(load_quantile_csv(path));
  {
    std::ofstream out(path);
    out << "y,x1\n1.0,2.0,3.0\n";
  }
  CHECK_THROWS(load_quantile_csv(path));
}

TEST_CASE("flat field loader") {
  const auto dir = temp_dir();
  const auto path = (dir / "field.txt").string();
  {
    std::ofstream out(path);
    for (int i = 0; i < 8; ++i) out << 0.25 * i << (i % 3 == 2 ? "\n" : " ");
  }
  const Vector field = load_field_file(path, 8);
  CHECK(field[4] == 1.0);
  CHECK_THROWS(load_field_file(path, 27));
}

TEST_CASE("target parameter validation") {
  CHECK_THROWS_AS(ExpPowerTarget(1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(DoubleWellTarget(0.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(GinzburgLandauTarget(1, 2.0, 0.1, 0.5), std::invalid_argument);
  const QuantileData data = simulate_quantile_data(5, {1.0}, 1);
  CHECK_THROWS_AS(QuantileRegressionTarget(data, 0.5, 1.0, 0.01, 1.0, 2.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(QuantileRegressionTarget(data, 0.5, 1.0, 0.01, 1.0, 1.0),
                  std::invalid_argument);
}
