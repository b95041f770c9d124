#include <doctest.h>

#include <cmath>
#include <random>

#include "ompbound/numkernel.hpp"
#include "oracles.hpp"

using namespace ompbound;

namespace {

Matrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Matrix a(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) a(i, j) = dist(eng);
  }
  return a;
}

Vector random_vector(Index size, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector v(size);
  for (Index i = 0; i < size; ++i) v(i) = dist(eng);
  return v;
}

}  // namespace

TEST_CASE("matvec basics") {
  Matrix id = Matrix::Identity(3, 3);
  Vector x(3);
  x << 1, 2, 3;
  CHECK(matvec(id, x) == x);

  Matrix a(2, 2);
  a << 5, -1, 2, 7;
  Vector zero = Vector::Zero(2);
  CHECK(matvec(a, zero) == zero);

  Matrix b(2, 2);
  b << 1, 2, 3, 4;
  Vector ones = Vector::Ones(2);
  Vector expected(2);
  expected << 3, 7;
  CHECK(matvec(b, ones) == expected);

  Vector wrong(3);
  wrong << 1, 1, 1;
  CHECK_THROWS_AS(matvec(b, wrong), ValidationError);
}

TEST_CASE("matvec linearity on random instances") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Matrix a = random_matrix(5, 4, 100 + seed);
    Vector x = random_vector(4, 200 + seed);
    Vector z = random_vector(4, 300 + seed);
    const double alpha = 0.7;
    const double beta = -1.9;
    Vector lhs = matvec(a, alpha * x + beta * z);
    Vector rhs = alpha * matvec(a, x) + beta * matvec(a, z);
    const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12 * scale);
  }
}

TEST_CASE("least squares on square invertible system") {
  Matrix a(2, 2);
  a << 1, 0, 0, 2;
  Vector y(2);
  y << 1, 4;
  auto fit = least_squares_on_support(a, y, {0, 1});
  CHECK(fit.coeffs(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(fit.coeffs(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(fit.residual.norm() <= 1e-14);
}

TEST_CASE("least squares on a single constant column") {
  Matrix a(2, 1);
  a << 1, 1;
  Vector y(2);
  y << 1, 3;
  auto fit = least_squares_on_support(a, y, {0});
  CHECK(fit.coeffs(0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(fit.residual(0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(fit.residual(1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("least squares matches the normal-equations oracle") {
  Matrix a = random_matrix(4, 3, 42);
  Vector y = random_vector(4, 43);
  IndexSet support{0, 2};
  auto fit = least_squares_on_support(a, y, support);
  auto reference = oracles::normal_equations_ls(a, y, support);
  REQUIRE(fit.coeffs.size() == 2);
  CHECK(std::abs(fit.coeffs(0) - reference[0]) <= 1e-10);
  CHECK(std::abs(fit.coeffs(1) - reference[1]) <= 1e-10);
}

TEST_CASE("least squares residual is orthogonal to the subset") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    Matrix a = random_matrix(6, 5, 500 + seed);
    Vector y = random_vector(6, 600 + seed);
    IndexSet support{0, 2, 4};
    auto fit = least_squares_on_support(a, y, support);
    for (Index j : support) {
      CHECK(std::abs(a.col(j).dot(fit.residual)) <= 1e-10 * y.norm());
    }
  }
}

TEST_CASE("least squares optimality under single-coordinate perturbation") {
  Matrix a = random_matrix(6, 4, 7);
  Vector y = random_vector(6, 8);
  IndexSet support{0, 1, 3};
  auto fit = least_squares_on_support(a, y, support);
  Matrix sub = columns(a, support);
  const double best = (y - sub * fit.coeffs).norm();
  for (Index i = 0; i < fit.coeffs.size(); ++i) {
    for (double bump : {1e-3, -1e-3}) {
      Vector perturbed = fit.coeffs;
      perturbed(i) += bump;
      CHECK((y - sub * perturbed).norm() >= best);
    }
  }
}

TEST_CASE("least squares rejects rank-deficient subsets by name") {
  Matrix a(3, 3);
  a.col(0) << 1, 0, 0;
  a.col(1) << 2, 0, 0;  // parallel to column 0
  a.col(2) << 0, 1, 0;
  Vector y(3);
  y << 1, 1, 1;
  CHECK_THROWS_WITH_AS(least_squares_on_support(a, y, {0, 1}),
                       doctest::Contains("{0, 1}"), DegeneracyError);
  CHECK_NOTHROW(least_squares_on_support(a, y, {0, 2}));
}

TEST_CASE("least squares validates indices") {
  Matrix a = random_matrix(3, 3, 1);
  Vector y = random_vector(3, 2);
  CHECK_THROWS_AS(least_squares_on_support(a, y, {0, 0}), ValidationError);
  CHECK_THROWS_AS(least_squares_on_support(a, y, {3}), ValidationError);
  CHECK_THROWS_AS(least_squares_on_support(a, y, {-1}), ValidationError);
}

TEST_CASE("extreme eigenvalues of simple matrices") {
  CHECK(extreme_eigenvalues(Matrix::Identity(2, 2)).lambda_min == doctest::Approx(1.0));
  CHECK(extreme_eigenvalues(Matrix::Identity(2, 2)).lambda_max == doctest::Approx(1.0));

  Matrix g(2, 2);
  g << 1, 0.3, 0.3, 1;
  auto ext = extreme_eigenvalues(g);
  CHECK(ext.lambda_min == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(ext.lambda_max == doctest::Approx(1.3).epsilon(1e-12));
}

TEST_CASE("extreme eigenvalues match the characteristic-polynomial oracle") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Matrix raw = random_matrix(3, 3, 900 + seed) * 5.0;
    Matrix g = 0.5 * (raw + raw.transpose());
    auto ext = extreme_eigenvalues(g);
    auto [ref_min, ref_max] = oracles::charpoly_extremes(g);
    CHECK(std::abs(ext.lambda_min - ref_min) <= 1e-10);
    CHECK(std::abs(ext.lambda_max - ref_max) <= 1e-10);
  }
}

TEST_CASE("extreme eigenvalues validate shape and symmetry") {
  CHECK_THROWS_AS(extreme_eigenvalues(Matrix::Zero(2, 3)), ValidationError);
  Matrix g(2, 2);
  g << 1, 0.5, 0.2, 1;
  CHECK_THROWS_AS(extreme_eigenvalues(g), ValidationError);
}

TEST_CASE("extreme eigenvalues bracket Rayleigh quotients") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    Matrix raw = random_matrix(4, 4, 1300 + seed);
    Matrix g = 0.5 * (raw + raw.transpose());
    auto ext = extreme_eigenvalues(g);
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
      Vector u = random_vector(4, 5000 + 100 * seed + trial);
      u.normalize();
      const double quotient = u.dot(g * u);
      CHECK(quotient >= ext.lambda_min - 1e-10);
      CHECK(quotient <= ext.lambda_max + 1e-10);
    }
  }
}
