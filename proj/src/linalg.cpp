#include "khmc/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace khmc {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Cholesky::Cholesky(const Matrix& a) : l_(a.n, 0.0) {
  const std::size_t n = a.n;
  if (n == 0) throw std::invalid_argument("Cholesky: empty matrix");
  double scale = 0.0;
  for (double v : a.data) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(a(i, j) - a(j, i)) > 1e-12 * std::max(1.0, scale))
        throw std::invalid_argument("Cholesky: matrix not symmetric");

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l_(i, k) * l_(j, k);
      if (i == j) {
        if (!(s > 0.0) || !std::isfinite(s))
          throw std::invalid_argument("Cholesky: matrix not positive definite");
        l_(i, i) = std::sqrt(s);
      } else {
        l_(i, j) = s / l_(j, j);
      }
    }
  }
}

Vector Cholesky::solve_lt(std::span<const double> z) const {
  const std::size_t n = l_.n;
  if (z.size() != n) throw std::invalid_argument("solve_lt: dimension mismatch");
  Vector y(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = z[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l_(k, ii) * y[k];
    y[ii] = s / l_(ii, ii);
  }
  return y;
}

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) {
  double m = norm_inf(v);
  if (m == 0.0) return 0.0;
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) {
    double t = x / m;
    s += t * t;
  }
  return m * std::sqrt(s);
}

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Vector mat_vec(const Matrix& a, std::span<const double> x) {
  if (x.size() != a.n) throw std::invalid_argument("mat_vec: dimension mismatch");
  Vector y(a.n, 0.0);
  for (std::size_t i = 0; i < a.n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.n; ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("least_squares_slope: need >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("least_squares_slope: degenerate abscissae");
  return sxy / sxx;
}

}  // namespace khmc
