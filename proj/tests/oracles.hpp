// Test-only reference implementations, kept deliberately independent of the
// production linear-algebra paths: plain-loop Gaussian elimination instead
// of QR, characteristic-polynomial bisection instead of a packaged
// eigensolver, and a from-scratch normal-equations greedy loop.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ompbound/numkernel.hpp"

namespace oracles {

using ompbound::Index;
using ompbound::IndexSet;
using ompbound::Matrix;
using ompbound::Vector;

/// Solves a dense square system by Gaussian elimination with partial
/// pivoting, using plain std::vector storage.
inline std::vector<double> gauss_solve(std::vector<std::vector<double>> a,
                                       std::vector<double> b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < n; ++row) {
      if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
    }
    if (a[pivot][col] == 0.0) throw std::runtime_error("gauss_solve: singular");
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t row = col + 1; row < n; ++row) {
      const double factor = a[row][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
      b[row] -= factor * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double sum = b[i];
    for (std::size_t k = i + 1; k < n; ++k) sum -= a[i][k] * x[k];
    x[i] = sum / a[i][i];
  }
  return x;
}

/// Least squares on a column subset through the normal equations
/// (A_S' A_S) c = A_S' y, solved by gauss_solve.
inline std::vector<double> normal_equations_ls(const Matrix& a, const Vector& y,
                                               const IndexSet& support) {
  const std::size_t k = support.size();
  std::vector<std::vector<double>> gram(k, std::vector<double>(k, 0.0));
  std::vector<double> rhs(k, 0.0);
  for (std::size_t p = 0; p < k; ++p) {
    for (std::size_t q = 0; q < k; ++q) {
      double sum = 0.0;
      for (Index i = 0; i < a.rows(); ++i) {
        sum += a(i, support[p]) * a(i, support[q]);
      }
      gram[p][q] = sum;
    }
    double sum = 0.0;
    for (Index i = 0; i < a.rows(); ++i) sum += a(i, support[p]) * y(i);
    rhs[p] = sum;
  }
  return gauss_solve(std::move(gram), std::move(rhs));
}

/// det(g - lambda I) by Gaussian elimination with partial pivoting.
inline double shifted_determinant(const Matrix& g, double lambda) {
  const std::size_t n = static_cast<std::size_t>(g.rows());
  std::vector<std::vector<double>> a(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      a[i][j] = g(static_cast<Index>(i), static_cast<Index>(j));
    }
    a[i][i] -= lambda;
  }
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < n; ++row) {
      if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
    }
    if (a[pivot][col] == 0.0) return 0.0;
    if (pivot != col) {
      std::swap(a[col], a[pivot]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t row = col + 1; row < n; ++row) {
      const double factor = a[row][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
    }
  }
  return det;
}

/// Extreme eigenvalues of a small symmetric matrix as the outermost roots
/// of the characteristic polynomial, bracketed by stepping inward from the
/// Gershgorin bounds and refined by bisection. Assumes simple extreme
/// eigenvalues, which holds for generic test matrices.
inline std::pair<double, double> charpoly_extremes(const Matrix& g,
                                                   double tol = 1e-12) {
  double lo = 0.0;
  double hi = 0.0;
  for (Index i = 0; i < g.rows(); ++i) {
    double radius = 0.0;
    for (Index j = 0; j < g.cols(); ++j) {
      if (i != j) radius += std::abs(g(i, j));
    }
    lo = std::min(lo, g(i, i) - radius);
    hi = std::max(hi, g(i, i) + radius);
  }
  lo -= 1.0;
  hi += 1.0;

  auto bisect = [&](double a, double b) {
    // keeps the invariant sign(det(a)) != sign(det(b))
    double fa = shifted_determinant(g, a);
    while (b - a > tol) {
      const double mid = 0.5 * (a + b);
      const double fm = shifted_determinant(g, mid);
      if ((fa < 0.0) == (fm < 0.0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    return 0.5 * (a + b);
  };

  // Below every eigenvalue the determinant is positive; the first sign
  // change walking up brackets lambda_min.
  const int steps = 4096;
  const double width = (hi - lo) / steps;
  double prev = lo;
  double prev_det = shifted_determinant(g, lo);
  double lambda_min = lo;
  for (int s = 1; s <= steps; ++s) {
    const double next = lo + s * width;
    const double next_det = shifted_determinant(g, next);
    if ((prev_det < 0.0) != (next_det < 0.0)) {
      lambda_min = bisect(prev, next);
      break;
    }
    prev = next;
    prev_det = next_det;
  }
  prev = hi;
  prev_det = shifted_determinant(g, hi);
  double lambda_max = hi;
  for (int s = 1; s <= steps; ++s) {
    const double next = hi - s * width;
    const double next_det = shifted_determinant(g, next);
    if ((prev_det < 0.0) != (next_det < 0.0)) {
      lambda_max = bisect(next, prev);
      break;
    }
    prev = next;
    prev_det = next_det;
  }
  return {lambda_min, lambda_max};
}

struct NaiveOmpResult {
  IndexSet support;
  std::vector<double> coeffs;  // on the support, in selection order
};

/// Reference greedy loop that recomputes everything from scratch each
/// iteration and fits by normal equations.
inline NaiveOmpResult naive_omp(const Matrix& phi, const Vector& y, int sparsity) {
  NaiveOmpResult result;
  std::vector<double> residual(static_cast<std::size_t>(y.size()));
  for (Index i = 0; i < y.size(); ++i) residual[static_cast<std::size_t>(i)] = y(i);

  for (int step = 0; step < sparsity; ++step) {
    Index best = -1;
    double best_abs = -1.0;
    for (Index j = 0; j < phi.cols(); ++j) {
      bool used = false;
      for (Index s : result.support) {
        if (s == j) used = true;
      }
      if (used) continue;
      double corr = 0.0;
      for (Index i = 0; i < phi.rows(); ++i) {
        corr += phi(i, j) * residual[static_cast<std::size_t>(i)];
      }
      if (std::abs(corr) > best_abs) {
        best_abs = std::abs(corr);
        best = j;
      }
    }
    result.support.push_back(best);
    result.coeffs = normal_equations_ls(phi, y, result.support);
    for (Index i = 0; i < phi.rows(); ++i) {
      double fitted = 0.0;
      for (std::size_t p = 0; p < result.support.size(); ++p) {
        fitted += phi(i, result.support[p]) * result.coeffs[p];
      }
      residual[static_cast<std::size_t>(i)] = y(i) - fitted;
    }
  }
  return result;
}

}  // namespace oracles
