#pragma once

// Central finite-difference oracle for gradient checks.  Lives in test code
// only; the library never differentiates numerically.

#include <cmath>
#include <functional>
#include <vector>

namespace khmc_test {

using Fn = std::function<double(const std::vector<double>&)>;

inline std::vector<double> central_fd_gradient(const Fn& f, std::vector<double> x,
                                               double h_scale = 1e-5) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = h_scale * std::max(1.0, std::abs(x[i]));
    const double xi = x[i];
    x[i] = xi + h;
    const double up = f(x);
    x[i] = xi - h;
    const double down = f(x);
    x[i] = xi;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

/// Passes when |a - b| <= max(abs_tol, rel_tol * max(|a|, |b|)) per entry.
inline bool gradients_match(const std::vector<double>& analytic,
                            const std::vector<double>& fd, double rel_tol = 1e-5,
                            double abs_tol = 1e-8) {
  if (analytic.size() != fd.size()) return false;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double err = std::abs(analytic[i] - fd[i]);
    const double scale = std::max(std::abs(analytic[i]), std::abs(fd[i]));
    if (err > std::max(abs_tol, rel_tol * scale)) return false;
  }
  return true;
}

}  // namespace khmc_test
