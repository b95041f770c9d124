#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ompbound/errors.hpp"

namespace ompbound {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Ordered list of distinct column indices.
using IndexSet = std::vector<Index>;

struct LeastSquaresFit {
  Vector coeffs;    // one coefficient per support index, in support order
  Vector residual;  // y - A_S * coeffs
};

struct SpectrumExtremes {
  double lambda_min;
  double lambda_max;
};

/// Dense matrix-vector product A*x with dimension validation.
Vector matvec(const Matrix& a, const Vector& x);

/// Extracts the submatrix of the given columns, in the order listed.
Matrix columns(const Matrix& a, const IndexSet& support);

/// Least squares min ||y - A_S c||_2 over the column subset S, solved by
/// column-pivoted QR. Rank is judged against 1e-12 of the largest column
/// norm; a deficient subset raises DegeneracyError naming the subset.
LeastSquaresFit least_squares_on_support(const Matrix& a, const Vector& y,
                                         const IndexSet& support);

/// Smallest and largest eigenvalue of a symmetric matrix. Inputs with
/// relative asymmetry above 1e-12 are rejected.
SpectrumExtremes extreme_eigenvalues(const Matrix& g);

}  // namespace ompbound
