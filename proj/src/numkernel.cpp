#include "ompbound/numkernel.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

namespace ompbound {

namespace {

std::string describe_subset(const IndexSet& support) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (i > 0) os << ", ";
    os << support[i];
  }
  os << "}";
  return os.str();
}

void validate_support(const Matrix& a, const IndexSet& support) {
  std::unordered_set<Index> seen;
  for (Index j : support) {
    if (j < 0 || j >= a.cols()) {
      std::ostringstream os;
      os << "column index " << j << " out of range [0, " << a.cols() << ")";
      throw ValidationError(os.str());
    }
    if (!seen.insert(j).second) {
      std::ostringstream os;
      os << "duplicate column index " << j << " in support";
      throw ValidationError(os.str());
    }
  }
}

}  // namespace

Vector matvec(const Matrix& a, const Vector& x) {
  if (x.size() != a.cols()) {
    std::ostringstream os;
    os << "matvec: vector length " << x.size() << " does not match " << a.rows()
       << "x" << a.cols() << " matrix";
    throw ValidationError(os.str());
  }
  return a * x;
}

Matrix columns(const Matrix& a, const IndexSet& support) {
  validate_support(a, support);
  Matrix sub(a.rows(), static_cast<Index>(support.size()));
  for (std::size_t i = 0; i < support.size(); ++i) {
    sub.col(static_cast<Index>(i)) = a.col(support[i]);
  }
  return sub;
}

LeastSquaresFit least_squares_on_support(const Matrix& a, const Vector& y,
                                         const IndexSet& support) {
  if (y.size() != a.rows()) {
    throw ValidationError("least_squares_on_support: measurement length mismatch");
  }
  if (support.empty()) {
    return {Vector(0), y};
  }
  const Matrix sub = columns(a, support);
  if (static_cast<Index>(support.size()) > a.rows()) {
    throw ValidationError(
        "least_squares_on_support: more columns than rows in subset " +
        describe_subset(support));
  }
  // Column-pivoted QR: the first pivot is the largest column norm, so the
  // relative threshold matches the rank rule (1e-12 of the largest column
  // norm).
  Eigen::ColPivHouseholderQR<Matrix> qr(sub);
  qr.setThreshold(1e-12);
  if (qr.rank() < static_cast<Index>(support.size())) {
    throw DegeneracyError("rank-deficient column subset " + describe_subset(support));
  }
  LeastSquaresFit fit;
  fit.coeffs = qr.solve(y);
  fit.residual = y - sub * fit.coeffs;
  return fit;
}

SpectrumExtremes extreme_eigenvalues(const Matrix& g) {
  if (g.rows() != g.cols()) {
    throw ValidationError("extreme_eigenvalues: matrix is not square");
  }
  const double scale = g.cwiseAbs().maxCoeff();
  const double asymmetry = (g - g.transpose()).cwiseAbs().maxCoeff();
  if (asymmetry > 1e-12 * scale) {
    std::ostringstream os;
    os << "extreme_eigenvalues: asymmetry " << asymmetry
       << " exceeds 1e-12 relative tolerance";
    throw ValidationError(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(g, Eigen::EigenvaluesOnly);
  const auto& values = solver.eigenvalues();
  return {values(0), values(values.size() - 1)};
}

}  // namespace ompbound
