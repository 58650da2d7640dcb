#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "khmc/ars.hpp"
#include "khmc/linalg.hpp"
#include "khmc/model.hpp"

namespace khmc {

/// K(p) = p^T A p / 2 for an SPD inverse-mass matrix A (identity, diagonal
/// or full).  Momentum is N(0, A^{-1}), drawn by a Cholesky transform.
class GaussianKinetic final : public KineticEnergySpec {
 public:
  using KineticEnergySpec::gradient;
  using KineticEnergySpec::sample;

  explicit GaussianKinetic(std::size_t dim);               // identity
  explicit GaussianKinetic(Vector inverse_mass_diagonal);  // diagonal
  explicit GaussianKinetic(const Matrix& inverse_mass);    // full SPD

  std::size_t dim() const override { return dim_; }
  double evaluate(std::span<const double> p) const override;
  void gradient(std::span<const double> p, std::span<double> out) const override;
  void sample(Rng& rng, std::span<double> out) const override;
  std::string name() const override { return "gaussian"; }

 private:
  std::size_t dim_;
  Vector diag_;                        // empty unless diagonal form
  std::unique_ptr<Matrix> full_;       // set only for the full form
  std::unique_ptr<Cholesky> chol_;     // factor of the full inverse mass
};

/// K(p) = sum |p_i| / b.  grad K is sign(p_i)/b with sign(0) = 0, so the
/// leapfrog map is defined everywhere.
class LaplaceKinetic final : public KineticEnergySpec {
 public:
  using KineticEnergySpec::gradient;
  using KineticEnergySpec::sample;

  LaplaceKinetic(std::size_t dim, double scale);

  std::size_t dim() const override { return dim_; }
  double evaluate(std::span<const double> p) const override;
  void gradient(std::span<const double> p, std::span<double> out) const override;
  void sample(Rng& rng, std::span<double> out) const override;
  std::string name() const override { return "laplace"; }

  double scale() const { return scale_; }

 private:
  std::size_t dim_;
  double scale_;
};

/// K(p) = sum |p_i|^beta / beta with beta > 1 (beta = 1 is the Laplace
/// family, kept as its own type).  Momentum draws use the gamma transform
/// p = s (beta g)^{1/beta}, g ~ Gamma(1/beta, 1), s a random sign.
class ExponentialPowerKinetic final : public KineticEnergySpec {
 public:
  using KineticEnergySpec::gradient;
  using KineticEnergySpec::sample;

  ExponentialPowerKinetic(std::size_t dim, double beta);

  std::size_t dim() const override { return dim_; }
  double evaluate(std::span<const double> p) const override;
  void gradient(std::span<const double> p, std::span<double> out) const override;
  void sample(Rng& rng, std::span<double> out) const override;
  std::string name() const override { return "exponential_power"; }

  double beta() const { return beta_; }

 private:
  std::size_t dim_;
  double beta_;
};

/// K(p) = sum ((nu+1)/2) log(1 + p_i^2/nu): Student t momentum, the
/// heavy-tailed choice.  grad K is bounded, with maximum (nu+1)/(2 sqrt(nu)).
class StudentTKinetic final : public KineticEnergySpec {
 public:
  using KineticEnergySpec::gradient;
  using KineticEnergySpec::sample;

  StudentTKinetic(std::size_t dim, double dof);

  std::size_t dim() const override { return dim_; }
  double evaluate(std::span<const double> p) const override;
  void gradient(std::span<const double> p, std::span<double> out) const override;
  void sample(Rng& rng, std::span<double> out) const override;
  std::string name() const override { return "student_t"; }

  double dof() const { return dof_; }

 private:
  std::size_t dim_;
  double dof_;
};

/// K(p) = sum m_i c_i^2 (1 + p_i^2/(m_i^2 c_i^2))^{1/2}: quadratic near 0,
/// linear in the tails; grad K is bounded by c_i.  Sampled per coordinate
/// with adaptive rejection sampling.
class RelativisticKinetic final : public KineticEnergySpec {
 public:
  using KineticEnergySpec::gradient;
  using KineticEnergySpec::sample;

  RelativisticKinetic(std::size_t dim, double mass, double speed);
  RelativisticKinetic(Vector mass, Vector speed);

  std::size_t dim() const override { return mass_.size(); }
  double evaluate(std::span<const double> p) const override;
  void gradient(std::span<const double> p, std::span<double> out) const override;
  void sample(Rng& rng, std::span<double> out) const override;
  std::string name() const override { return "relativistic"; }

 private:
  Vector mass_, speed_;
  std::vector<std::vector<std::size_t>> groups_;  // coordinates sharing (m, c)
};

/// K(p) = sum beta^{-1} (1 + p_i^2/gamma_i)^{beta/2} with beta >= 1:
/// quadratic near 0 with power-beta tails.  Sampled per coordinate with
/// adaptive rejection sampling (K is convex for beta >= 1).
class RelativisticPowerKinetic final : public KineticEnergySpec {
 public:
  using KineticEnergySpec::gradient;
  using KineticEnergySpec::sample;

  RelativisticPowerKinetic(std::size_t dim, double beta, double gamma);
  RelativisticPowerKinetic(double beta, Vector gamma);

  std::size_t dim() const override { return gamma_.size(); }
  double evaluate(std::span<const double> p) const override;
  void gradient(std::span<const double> p, std::span<double> out) const override;
  void sample(Rng& rng, std::span<double> out) const override;
  std::string name() const override { return "relativistic_power"; }

  double beta() const { return beta_; }

 private:
  double beta_;
  Vector gamma_;
  std::vector<std::vector<std::size_t>> groups_;  // coordinates sharing gamma
};

/// n independent draws of the implicit noise grad K(p), p ~ nu.
std::vector<Vector> implicit_noise_samples(const KineticEnergySpec& kin,
                                           std::size_t n, Rng& rng);

}  // namespace khmc
