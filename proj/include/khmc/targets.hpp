#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "khmc/linalg.hpp"
#include "khmc/model.hpp"
#include "khmc/rng.hpp"

namespace khmc {

/// U(x) = x^T P x / 2 for an SPD precision matrix P (diagonal or full).
class GaussianTarget final : public TargetPotential {
 public:
  using TargetPotential::gradient;

  explicit GaussianTarget(Vector precision_diagonal);
  explicit GaussianTarget(const Matrix& precision);

  std::size_t dim() const override { return dim_; }
  double evaluate(std::span<const double> x) const override;
  void gradient(std::span<const double> x, std::span<double> out) const override;

 private:
  std::size_t dim_;
  Vector diag_;
  std::unique_ptr<Matrix> full_;
};

/// U(x) = sum |x_i|^alpha / alpha, alpha > 1.
class ExpPowerTarget final : public TargetPotential {
 public:
  using TargetPotential::gradient;

  ExpPowerTarget(std::size_t dim, double alpha);

  std::size_t dim() const override { return dim_; }
  double evaluate(std::span<const double> x) const override;
  void gradient(std::span<const double> x, std::span<double> out) const override;

  double alpha() const { return alpha_; }

 private:
  std::size_t dim_;
  double alpha_;
};

/// One-dimensional double well U(x) = C (a x^4 - b x^2).
class DoubleWellTarget final : public TargetPotential {
 public:
  using TargetPotential::gradient;

  DoubleWellTarget(double c, double a, double b);

  std::size_t dim() const override { return 1; }
  double evaluate(std::span<const double> x) const override;
  void gradient(std::span<const double> x, std::span<double> out) const override;

 private:
  double c_, a_, b_;
};

/// Ten-dimensional funnel: coordinates (x_1..x_9, v) with
/// U = v^2/18 + 9v/2 + e^{-v} sum x_i^2 / 2.  The gradient is the exact
/// derivative of this U.
class FunnelTarget final : public TargetPotential {
 public:
  using TargetPotential::gradient;

  FunnelTarget() = default;

  std::size_t dim() const override { return 10; }
  double evaluate(std::span<const double> x) const override;
  void gradient(std::span<const double> x, std::span<double> out) const override;
};

/// Smoothed pinball loss
///   (tau-1) u + xi log[1 + exp(u / xi)] + g(xi, sigma, tau),  u = (y-mu)/sigma,
/// with g = log{ xi sigma Beta(xi(1-tau), xi tau) }.  Overflow-safe for
/// large |u|; recovers the pinball loss plus g as xi -> 0.
double smoothed_pinball_loss(double y, double mu, double tau, double sigma, double xi);

/// The beta-function constant g(xi, sigma, tau) (independent of mu).
double smoothed_pinball_constant(double tau, double sigma, double xi);

struct QuantileData {
  std::vector<Vector> covariates;  // n rows of length m
  Vector responses;                // n
};

/// Covariates standard normal, responses mu(x, beta_true) + standard normal
/// noise; fully determined by the seed.
QuantileData simulate_quantile_data(std::size_t n, const Vector& beta_true,
                                    std::uint64_t seed);

/// Loads rows from a CSV with header `y,x1,...,xm`.
QuantileData load_quantile_csv(const std::string& path);

/// Bayesian quantile regression posterior potential:
///   U(beta) = sum_i L(beta, x_i, y_i) + lambda sum_j |beta_j|^q,
/// L the smoothed pinball loss of the linear predictor, q in (1, 2].
class QuantileRegressionTarget final : public TargetPotential {
 public:
  using TargetPotential::gradient;

  QuantileRegressionTarget(QuantileData data, double tau, double sigma, double xi,
                           double lambda, double q);

  std::size_t dim() const override { return m_; }
  double evaluate(std::span<const double> beta) const override;
  void gradient(std::span<const double> beta, std::span<double> out) const override;

  double q() const { return q_; }

 private:
  QuantileData data_;
  std::size_t m_;
  double tau_, sigma_, xi_, lambda_, q_;
  double g_const_;
};

/// Reads a whitespace-separated flat field of `expected` values.
Vector load_field_file(const std::string& path, std::size_t expected);

/// Ginzburg-Landau lattice potential on an n^3 periodic lattice:
///   U(psi) = sum_s { (1-tau)/2 psi_s^2 + tau alpha/2 |fwd_diff psi_s|^2
///            + tau lambda/4 psi_s^4 }.
/// The field is stored flat in row-major (i, j, k) order; neighbor indices
/// are precomputed since the gradient is the hot loop.
class GinzburgLandauTarget final : public TargetPotential {
 public:
  using TargetPotential::gradient;

  GinzburgLandauTarget(std::size_t side, double tau, double alpha, double lambda);

  std::size_t dim() const override { return d_; }
  double evaluate(std::span<const double> psi) const override;
  void gradient(std::span<const double> psi, std::span<double> out) const override;

  std::size_t side() const { return side_; }

 private:
  std::size_t side_, d_;
  double tau_, alpha_, lambda_;
  std::vector<std::size_t> fwd_;  // d*3 forward neighbors
  std::vector<std::size_t> bwd_;  // d*3 backward neighbors
};

/// Exact evaluate, gradient perturbed with fresh zero-mean Gaussian noise
/// of the given per-coordinate standard deviation on every call.  Owns its
/// Rng, so instances are per chain, never shared across threads.
class NoisyGradientWrapper final : public TargetPotential {
 public:
  using TargetPotential::gradient;

  NoisyGradientWrapper(std::shared_ptr<const TargetPotential> inner, double noise_scale,
                       Rng rng);

  std::size_t dim() const override { return inner_->dim(); }
  double evaluate(std::span<const double> x) const override;
  void gradient(std::span<const double> x, std::span<double> out) const override;

 private:
  std::shared_ptr<const TargetPotential> inner_;
  double noise_scale_;
  mutable Rng rng_;
};

std::unique_ptr<TargetPotential> wrap_noisy(std::shared_ptr<const TargetPotential> inner,
                                            double noise_scale, Rng rng);

}  // namespace khmc
