#include "khmc/targets.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace khmc {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// log(1 + exp(t)) without overflow.
double log1p_exp(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

}  // namespace

// ---------------------------------------------------------------------------
// Gaussian

GaussianTarget::GaussianTarget(Vector precision_diagonal)
    : dim_(precision_diagonal.size()), diag_(std::move(precision_diagonal)) {
  require(dim_ > 0, "GaussianTarget: dim must be positive");
  for (double v : diag_) require(v > 0.0, "GaussianTarget: precision entries must be positive");
}

GaussianTarget::GaussianTarget(const Matrix& precision)
    : dim_(precision.n), full_(std::make_unique<Matrix>(precision)) {
  require(dim_ > 0, "GaussianTarget: dim must be positive");
  Cholesky spd_check(precision);  // throws unless SPD
}

double GaussianTarget::evaluate(std::span<const double> x) const {
  check_dim(x);
  if (full_) {
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) s += x[i] * (*full_)(i, j) * x[j];
    return 0.5 * s;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) s += diag_[i] * x[i] * x[i];
  return 0.5 * s;
}

void GaussianTarget::gradient(std::span<const double> x, std::span<double> out) const {
  check_dim(x);
  if (full_) {
    for (std::size_t i = 0; i < dim_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < dim_; ++j) s += (*full_)(i, j) * x[j];
      out[i] = s;
    }
    return;
  }
  for (std::size_t i = 0; i < dim_; ++i) out[i] = diag_[i] * x[i];
}

// ---------------------------------------------------------------------------
// Exponential power

ExpPowerTarget::ExpPowerTarget(std::size_t dim, double alpha) : dim_(dim), alpha_(alpha) {
  require(dim > 0, "ExpPowerTarget: dim must be positive");
  require(alpha > 1.0, "ExpPowerTarget: alpha must exceed 1");
}

double ExpPowerTarget::evaluate(std::span<const double> x) const {
  check_dim(x);
  double s = 0.0;
  for (double v : x) s += std::pow(std::abs(v), alpha_);
  return s / alpha_;
}

void ExpPowerTarget::gradient(std::span<const double> x, std::span<double> out) const {
  check_dim(x);
  for (std::size_t i = 0; i < dim_; ++i)
    out[i] = x[i] == 0.0 ? 0.0 : sign(x[i]) * std::pow(std::abs(x[i]), alpha_ - 1.0);
}

// ---------------------------------------------------------------------------
// Double well

DoubleWellTarget::DoubleWellTarget(double c, double a, double b) : c_(c), a_(a), b_(b) {
  require(c > 0.0 && a > 0.0 && b > 0.0, "DoubleWellTarget: parameters must be positive");
}

double DoubleWellTarget::evaluate(std::span<const double> x) const {
  check_dim(x);
  const double v = x[0];
  return c_ * (a_ * v * v * v * v - b_ * v * v);
}

void DoubleWellTarget::gradient(std::span<const double> x, std::span<double> out) const {
  check_dim(x);
  const double v = x[0];
  out[0] = c_ * (4.0 * a_ * v * v * v - 2.0 * b_ * v);
}

// ---------------------------------------------------------------------------
// Funnel

double FunnelTarget::evaluate(std::span<const double> x) const {
  check_dim(x);
  const double v = x[9];
  double sq = 0.0;
  for (std::size_t i = 0; i < 9; ++i) sq += x[i] * x[i];
  return v * v / 18.0 + 4.5 * v + std::exp(-v) * 0.5 * sq;
}

void FunnelTarget::gradient(std::span<const double> x, std::span<double> out) const {
  check_dim(x);
  const double v = x[9];
  const double ev = std::exp(-v);
  double sq = 0.0;
  for (std::size_t i = 0; i < 9; ++i) {
    out[i] = ev * x[i];
    sq += x[i] * x[i];
  }
  out[9] = v / 9.0 + 4.5 - ev * 0.5 * sq;
}

// ---------------------------------------------------------------------------
// Quantile regression

double smoothed_pinball_constant(double tau, double sigma, double xi) {
  require(tau > 0.0 && tau < 1.0, "smoothed_pinball: tau must be in (0,1)");
  require(sigma > 0.0, "smoothed_pinball: sigma must be positive");
  require(xi > 0.0, "smoothed_pinball: xi must be positive");
  return std::log(xi * sigma) + log_beta(xi * (1.0 - tau), xi * tau);
}

double smoothed_pinball_loss(double y, double mu, double tau, double sigma, double xi) {
  const double g = smoothed_pinball_constant(tau, sigma, xi);
  const double u = (y - mu) / sigma;
  return (tau - 1.0) * u + xi * log1p_exp(u / xi) + g;
}

QuantileData simulate_quantile_data(std::size_t n, const Vector& beta_true,
                                    std::uint64_t seed) {
  require(n >= 1, "simulate_quantile_data: n must be >= 1");
  require(!beta_true.empty(), "simulate_quantile_data: beta_true must be nonempty");
  Rng rng(seed);
  QuantileData data;
  data.covariates.resize(n, Vector(beta_true.size()));
  data.responses.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double mu = 0.0;
    for (std::size_t j = 0; j < beta_true.size(); ++j) {
      data.covariates[i][j] = rng.normal();
      mu += data.covariates[i][j] * beta_true[j];
    }
    data.responses[i] = mu + rng.normal();
  }
  return data;
}

QuantileData load_quantile_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_quantile_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_quantile_csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header.empty() || header[0] != "y")
    throw std::runtime_error("load_quantile_csv: header must start with 'y'");
  const std::size_t m = header.size() - 1;
  require(m >= 1, "load_quantile_csv: need at least one covariate column");
  for (std::size_t j = 0; j < m; ++j)
    if (header[j + 1] != "x" + std::to_string(j + 1))
      throw std::runtime_error("load_quantile_csv: expected header y,x1,...,xm");
  QuantileData data;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    Vector row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != m + 1)
      throw std::runtime_error("load_quantile_csv: bad field count at line " +
                               std::to_string(lineno));
    data.responses.push_back(row[0]);
    data.covariates.emplace_back(row.begin() + 1, row.end());
  }
  require(!data.responses.empty(), "load_quantile_csv: no data rows");
  return data;
}

QuantileRegressionTarget::QuantileRegressionTarget(QuantileData data, double tau, double sigma,
                                                   double xi, double lambda, double q)
    : data_(std::move(data)),
      m_(data_.covariates.empty() ? 0 : data_.covariates[0].size()),
      tau_(tau),
      sigma_(sigma),
      xi_(xi),
      lambda_(lambda),
      q_(q),
      g_const_(smoothed_pinball_constant(tau, sigma, xi)) {
  require(!data_.covariates.empty(), "QuantileRegressionTarget: need n >= 1 data points");
  require(data_.covariates.size() == data_.responses.size(),
          "QuantileRegressionTarget: covariate/response count mismatch");
  for (const auto& row : data_.covariates)
    require(row.size() == m_, "QuantileRegressionTarget: ragged covariate rows");
  require(m_ >= 1, "QuantileRegressionTarget: need m >= 1 covariates");
  require(lambda > 0.0, "QuantileRegressionTarget: lambda must be positive");
  require(q > 1.0 && q <= 2.0, "QuantileRegressionTarget: q must be in (1, 2]");
}

double QuantileRegressionTarget::evaluate(std::span<const double> beta) const {
  check_dim(beta);
  const std::size_t n = data_.responses.size();
  double u_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double mu = 0.0;
    for (std::size_t j = 0; j < m_; ++j) mu += data_.covariates[i][j] * beta[j];
    const double u = (data_.responses[i] - mu) / sigma_;
    u_sum += (tau_ - 1.0) * u + xi_ * log1p_exp(u / xi_) + g_const_;
  }
  double prior = 0.0;
  for (std::size_t j = 0; j < m_; ++j) prior += std::pow(std::abs(beta[j]), q_);
  return u_sum + lambda_ * prior;
}

void QuantileRegressionTarget::gradient(std::span<const double> beta,
                                        std::span<double> out) const {
  check_dim(beta);
  for (std::size_t j = 0; j < m_; ++j)
    out[j] = beta[j] == 0.0
                 ? 0.0
                 : lambda_ * q_ * sign(beta[j]) * std::pow(std::abs(beta[j]), q_ - 1.0);
  const std::size_t n = data_.responses.size();
  for (std::size_t i = 0; i < n; ++i) {
    double mu = 0.0;
    for (std::size_t j = 0; j < m_; ++j) mu += data_.covariates[i][j] * beta[j];
    const double u = (data_.responses[i] - mu) / sigma_;
    const double w = (tau_ - 1.0) + sigmoid(u / xi_);
    for (std::size_t j = 0; j < m_; ++j) out[j] -= data_.covariates[i][j] * w / sigma_;
  }
}

// ---------------------------------------------------------------------------
// Ginzburg-Landau

Vector load_field_file(const std::string& path, std::size_t expected) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_field_file: cannot open " + path);
  Vector field;
  field.reserve(expected);
  double v;
  while (in >> v) field.push_back(v);
  if (field.size() != expected)
    throw std::runtime_error("load_field_file: expected " + std::to_string(expected) +
                             " values, got " + std::to_string(field.size()));
  return field;
}

GinzburgLandauTarget::GinzburgLandauTarget(std::size_t side, double tau, double alpha,
                                           double lambda)
    : side_(side), d_(side * side * side), tau_(tau), alpha_(alpha), lambda_(lambda) {
  require(side >= 2, "GinzburgLandauTarget: side must be >= 2");
  require(tau > 0.0 && alpha > 0.0 && lambda > 0.0,
          "GinzburgLandauTarget: parameters must be positive");
  fwd_.resize(d_ * 3);
  bwd_.resize(d_ * 3);
  const std::size_t n = side_;
  auto idx = [n](std::size_t i, std::size_t j, std::size_t k) { return (i * n + j) * n + k; };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t s = idx(i, j, k);
        fwd_[s * 3 + 0] = idx((i + 1) % n, j, k);
        fwd_[s * 3 + 1] = idx(i, (j + 1) % n, k);
        fwd_[s * 3 + 2] = idx(i, j, (k + 1) % n);
        bwd_[s * 3 + 0] = idx((i + n - 1) % n, j, k);
        bwd_[s * 3 + 1] = idx(i, (j + n - 1) % n, k);
        bwd_[s * 3 + 2] = idx(i, j, (k + n - 1) % n);
      }
}

double GinzburgLandauTarget::evaluate(std::span<const double> psi) const {
  check_dim(psi);
  double u = 0.0;
  for (std::size_t s = 0; s < d_; ++s) {
    const double v = psi[s];
    double grad_sq = 0.0;
    for (int e = 0; e < 3; ++e) {
      const double dv = psi[fwd_[s * 3 + e]] - v;
      grad_sq += dv * dv;
    }
    u += 0.5 * (1.0 - tau_) * v * v + 0.5 * tau_ * alpha_ * grad_sq +
         0.25 * tau_ * lambda_ * v * v * v * v;
  }
  return u;
}

void GinzburgLandauTarget::gradient(std::span<const double> psi, std::span<double> out) const {
  check_dim(psi);
  const double ta = tau_ * alpha_;
  const double tl = tau_ * lambda_;
  for (std::size_t s = 0; s < d_; ++s) {
    const double v = psi[s];
    double nbr = 0.0;
    for (int e = 0; e < 3; ++e) nbr += psi[fwd_[s * 3 + e]] + psi[bwd_[s * 3 + e]];
    out[s] = (1.0 - tau_) * v + tl * v * v * v + ta * (6.0 * v - nbr);
  }
}

// ---------------------------------------------------------------------------
// Noisy gradient wrapper

NoisyGradientWrapper::NoisyGradientWrapper(std::shared_ptr<const TargetPotential> inner,
                                           double noise_scale, Rng rng)
    : inner_(std::move(inner)), noise_scale_(noise_scale), rng_(rng) {
  require(inner_ != nullptr, "NoisyGradientWrapper: inner target required");
  require(noise_scale >= 0.0, "NoisyGradientWrapper: noise_scale must be >= 0");
}

double NoisyGradientWrapper::evaluate(std::span<const double> x) const {
  return inner_->evaluate(x);
}

void NoisyGradientWrapper::gradient(std::span<const double> x, std::span<double> out) const {
  inner_->gradient(x, out);
  if (noise_scale_ == 0.0) return;
  for (double& v : out) v += noise_scale_ * rng_.normal();
}

std::unique_ptr<TargetPotential> wrap_noisy(std::shared_ptr<const TargetPotential> inner,
                                            double noise_scale, Rng rng) {
  return std::make_unique<NoisyGradientWrapper>(std::move(inner), noise_scale, rng);
}

}  // namespace khmc
