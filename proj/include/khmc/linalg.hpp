#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace khmc {

using Vector = std::vector<double>;

/// Dense row-major square matrix, just large enough for the SPD
/// mass/precision matrices used here (d up to ~1000).
struct Matrix {
  std::size_t n = 0;
  std::vector<double> data;  // n * n, row-major

  Matrix() = default;
  Matrix(std::size_t n_, double fill = 0.0) : n(n_), data(n_ * n_, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }

  static Matrix identity(std::size_t n);
};

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
/// Construction throws std::invalid_argument if the input is not symmetric
/// (tolerance 1e-12 relative) or not positive definite.
class Cholesky {
 public:
  explicit Cholesky(const Matrix& a);

  std::size_t dim() const { return l_.n; }

  /// y = L^{-T} z (back substitution).  If A = L L^T then y ~ N(0, A^{-1})
  /// for z standard normal.
  Vector solve_lt(std::span<const double> z) const;

  const Matrix& factor() const { return l_; }

 private:
  Matrix l_;
};

bool all_finite(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);
/// Euclidean norm, scaled to avoid overflow for very large entries.
double norm2(std::span<const double> v);
double norm_inf(std::span<const double> v);

/// A x for square A.
Vector mat_vec(const Matrix& a, std::span<const double> x);

/// Slope of the least-squares line through (x_i, y_i).
double least_squares_slope(std::span<const double> x, std::span<const double> y);

}  // namespace khmc
