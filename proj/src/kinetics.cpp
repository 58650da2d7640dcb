#include "khmc/kinetics.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace khmc {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Coordinates sharing identical parameters can share one ARS envelope per
// sample() call.
template <typename Key>
std::vector<std::vector<std::size_t>> group_by(const std::vector<Key>& keys) {
  std::map<Key, std::vector<std::size_t>> m;
  for (std::size_t i = 0; i < keys.size(); ++i) m[keys[i]].push_back(i);
  std::vector<std::vector<std::size_t>> groups;
  groups.reserve(m.size());
  for (auto& [k, idx] : m) groups.push_back(std::move(idx));
  return groups;
}

}  // namespace

// ---------------------------------------------------------------------------
// Gaussian

GaussianKinetic::GaussianKinetic(std::size_t dim) : dim_(dim) {
  require(dim > 0, "GaussianKinetic: dim must be positive");
}

GaussianKinetic::GaussianKinetic(Vector inverse_mass_diagonal)
    : dim_(inverse_mass_diagonal.size()), diag_(std::move(inverse_mass_diagonal)) {
  require(dim_ > 0, "GaussianKinetic: dim must be positive");
  for (double a : diag_) require(a > 0.0, "GaussianKinetic: diagonal entries must be positive");
}

GaussianKinetic::GaussianKinetic(const Matrix& inverse_mass)
    : dim_(inverse_mass.n),
      full_(std::make_unique<Matrix>(inverse_mass)),
      chol_(std::make_unique<Cholesky>(inverse_mass)) {
  require(dim_ > 0, "GaussianKinetic: dim must be positive");
}

double GaussianKinetic::evaluate(std::span<const double> p) const {
  check_dim(p);
  if (full_) {
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) s += p[i] * (*full_)(i, j) * p[j];
    return 0.5 * s;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) s += (diag_.empty() ? 1.0 : diag_[i]) * p[i] * p[i];
  return 0.5 * s;
}

void GaussianKinetic::gradient(std::span<const double> p, std::span<double> out) const {
  check_dim(p);
  if (full_) {
    for (std::size_t i = 0; i < dim_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < dim_; ++j) s += (*full_)(i, j) * p[j];
      out[i] = s;
    }
    return;
  }
  for (std::size_t i = 0; i < dim_; ++i) out[i] = (diag_.empty() ? 1.0 : diag_[i]) * p[i];
}

void GaussianKinetic::sample(Rng& rng, std::span<double> out) const {
  if (full_) {
    Vector z(dim_);
    for (double& v : z) v = rng.normal();
    Vector p = chol_->solve_lt(z);
    std::copy(p.begin(), p.end(), out.begin());
    return;
  }
  for (std::size_t i = 0; i < dim_; ++i)
    out[i] = rng.normal() / std::sqrt(diag_.empty() ? 1.0 : diag_[i]);
}

// ---------------------------------------------------------------------------
// Laplace

LaplaceKinetic::LaplaceKinetic(std::size_t dim, double scale) : dim_(dim), scale_(scale) {
  require(dim > 0, "LaplaceKinetic: dim must be positive");
  require(scale > 0.0, "LaplaceKinetic: scale must be positive");
}

double LaplaceKinetic::evaluate(std::span<const double> p) const {
  check_dim(p);
  double s = 0.0;
  for (double v : p) s += std::abs(v);
  return s / scale_;
}

void LaplaceKinetic::gradient(std::span<const double> p, std::span<double> out) const {
  check_dim(p);
  for (std::size_t i = 0; i < dim_; ++i) out[i] = sign(p[i]) / scale_;
}

void LaplaceKinetic::sample(Rng& rng, std::span<double> out) const {
  for (std::size_t i = 0; i < dim_; ++i) {
    const double u = rng.uniform() - 0.5;
    out[i] = -scale_ * sign(u) * std::log1p(-2.0 * std::abs(u));
  }
}

// ---------------------------------------------------------------------------
// Exponential power

ExponentialPowerKinetic::ExponentialPowerKinetic(std::size_t dim, double beta)
    : dim_(dim), beta_(beta) {
  require(dim > 0, "ExponentialPowerKinetic: dim must be positive");
  // beta = 1 has a discontinuous derivative; that case is LaplaceKinetic.
  require(beta > 1.0, "ExponentialPowerKinetic: beta must exceed 1");
}

double ExponentialPowerKinetic::evaluate(std::span<const double> p) const {
  check_dim(p);
  double s = 0.0;
  for (double v : p) s += std::pow(std::abs(v), beta_);
  return s / beta_;
}

void ExponentialPowerKinetic::gradient(std::span<const double> p, std::span<double> out) const {
  check_dim(p);
  for (std::size_t i = 0; i < dim_; ++i)
    out[i] = p[i] == 0.0 ? 0.0 : sign(p[i]) * std::pow(std::abs(p[i]), beta_ - 1.0);
}

void ExponentialPowerKinetic::sample(Rng& rng, std::span<double> out) const {
  for (std::size_t i = 0; i < dim_; ++i) {
    const double g = rng.gamma(1.0 / beta_);
    const double s = rng.uniform() < 0.5 ? -1.0 : 1.0;
    out[i] = s * std::pow(beta_ * g, 1.0 / beta_);
  }
}

// ---------------------------------------------------------------------------
// Student t

StudentTKinetic::StudentTKinetic(std::size_t dim, double dof) : dim_(dim), dof_(dof) {
  require(dim > 0, "StudentTKinetic: dim must be positive");
  require(dof > 0.0, "StudentTKinetic: dof must be positive");
}

double StudentTKinetic::evaluate(std::span<const double> p) const {
  check_dim(p);
  double s = 0.0;
  for (double v : p) s += std::log1p(v * v / dof_);
  return 0.5 * (dof_ + 1.0) * s;
}

void StudentTKinetic::gradient(std::span<const double> p, std::span<double> out) const {
  check_dim(p);
  for (std::size_t i = 0; i < dim_; ++i)
    out[i] = (dof_ + 1.0) * p[i] / (dof_ + p[i] * p[i]);
}

void StudentTKinetic::sample(Rng& rng, std::span<double> out) const {
  for (std::size_t i = 0; i < dim_; ++i) out[i] = rng.student_t(dof_);
}

// ---------------------------------------------------------------------------
// Relativistic

RelativisticKinetic::RelativisticKinetic(std::size_t dim, double mass, double speed)
    : RelativisticKinetic(Vector(dim, mass), Vector(dim, speed)) {}

RelativisticKinetic::RelativisticKinetic(Vector mass, Vector speed)
    : mass_(std::move(mass)), speed_(std::move(speed)) {
  require(!mass_.empty(), "RelativisticKinetic: dim must be positive");
  require(mass_.size() == speed_.size(), "RelativisticKinetic: mass/speed size mismatch");
  std::vector<std::pair<double, double>> keys(mass_.size());
  for (std::size_t i = 0; i < mass_.size(); ++i) {
    require(mass_[i] > 0.0, "RelativisticKinetic: mass must be positive");
    require(speed_[i] > 0.0, "RelativisticKinetic: speed must be positive");
    keys[i] = {mass_[i], speed_[i]};
  }
  groups_ = group_by(keys);
}

double RelativisticKinetic::evaluate(std::span<const double> p) const {
  check_dim(p);
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double mc = mass_[i] * speed_[i];
    s += mass_[i] * speed_[i] * speed_[i] * std::sqrt(1.0 + (p[i] / mc) * (p[i] / mc));
  }
  return s;
}

void RelativisticKinetic::gradient(std::span<const double> p, std::span<double> out) const {
  check_dim(p);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double mc = mass_[i] * speed_[i];
    out[i] = (p[i] / mass_[i]) / std::sqrt(1.0 + (p[i] / mc) * (p[i] / mc));
  }
}

void RelativisticKinetic::sample(Rng& rng, std::span<double> out) const {
  for (const auto& group : groups_) {
    const double m = mass_[group.front()];
    const double c = speed_[group.front()];
    const double mc = m * c;
    auto logdens = [m, c, mc](double p) {
      return -m * c * c * std::sqrt(1.0 + (p / mc) * (p / mc));
    };
    auto dlogdens = [m, mc](double p) {
      return -(p / m) / std::sqrt(1.0 + (p / mc) * (p / mc));
    };
    const auto init = ars_bracket(dlogdens, mc);
    ArsSampler sampler(logdens, dlogdens, init.first, init.second);
    for (std::size_t i : group) out[i] = sampler.sample(rng);
  }
}

// ---------------------------------------------------------------------------
// Relativistic power

RelativisticPowerKinetic::RelativisticPowerKinetic(std::size_t dim, double beta, double gamma)
    : RelativisticPowerKinetic(beta, Vector(dim, gamma)) {}

RelativisticPowerKinetic::RelativisticPowerKinetic(double beta, Vector gamma)
    : beta_(beta), gamma_(std::move(gamma)) {
  require(!gamma_.empty(), "RelativisticPowerKinetic: dim must be positive");
  require(beta >= 1.0, "RelativisticPowerKinetic: beta must be >= 1");
  for (double g : gamma_) require(g > 0.0, "RelativisticPowerKinetic: gamma must be positive");
  groups_ = group_by(gamma_);
}

double RelativisticPowerKinetic::evaluate(std::span<const double> p) const {
  check_dim(p);
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    s += std::pow(1.0 + p[i] * p[i] / gamma_[i], 0.5 * beta_);
  return s / beta_;
}

void RelativisticPowerKinetic::gradient(std::span<const double> p, std::span<double> out) const {
  check_dim(p);
  for (std::size_t i = 0; i < p.size(); ++i)
    out[i] = (p[i] / gamma_[i]) * std::pow(1.0 + p[i] * p[i] / gamma_[i], 0.5 * beta_ - 1.0);
}

void RelativisticPowerKinetic::sample(Rng& rng, std::span<double> out) const {
  for (const auto& group : groups_) {
    const double g = gamma_[group.front()];
    const double beta = beta_;
    auto logdens = [g, beta](double p) {
      return -std::pow(1.0 + p * p / g, 0.5 * beta) / beta;
    };
    auto dlogdens = [g, beta](double p) {
      return -(p / g) * std::pow(1.0 + p * p / g, 0.5 * beta - 1.0);
    };
    const auto init = ars_bracket(dlogdens, std::sqrt(g));
    ArsSampler sampler(logdens, dlogdens, init.first, init.second);
    for (std::size_t i : group) out[i] = sampler.sample(rng);
  }
}

// ---------------------------------------------------------------------------

std::vector<Vector> implicit_noise_samples(const KineticEnergySpec& kin, std::size_t n,
                                           Rng& rng) {
  if (n < 1) throw std::invalid_argument("implicit_noise_samples: n must be >= 1");
  std::vector<Vector> draws;
  draws.reserve(n);
  Vector p(kin.dim()), g(kin.dim());
  for (std::size_t k = 0; k < n; ++k) {
    kin.sample(rng, p);
    kin.gradient(p, g);
    draws.push_back(g);
  }
  return draws;
}

}  // namespace khmc
