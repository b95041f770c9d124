#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "ompbound/bounds.hpp"
#include "ompbound/io.hpp"

using namespace ompbound;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("signal statistics") {
  Matrix id = Matrix::Identity(4, 4);
  Vector v0 = Vector::Zero(4);

  Vector equal = Vector::Zero(4);
  equal << 1, -1, 1, 0;
  auto stats = signal_stats(equal, id, v0);
  CHECK(stats.sparsity == 3);
  CHECK(stats.mar_ratio == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(stats.MAR == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::isinf(stats.snr));

  Vector skewed = Vector::Zero(4);
  skewed << 3, 1, 0, 0;
  auto s2 = signal_stats(skewed, id, v0);
  CHECK(s2.sparsity == 2);
  CHECK(s2.x_min == 1.0);
  CHECK(s2.x_max == 3.0);
  CHECK(s2.mar_ratio == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
  CHECK(s2.MAR == doctest::Approx(0.2).epsilon(1e-15));

  Vector noise(4);
  noise << 1, 1, 0, 0;  // ||v||^2 = 2 against ||x||^2 = 10
  CHECK(signal_stats(skewed, id, noise).snr == doctest::Approx(5.0).epsilon(1e-15));

  CHECK_THROWS_AS(signal_stats(Vector::Zero(4), id, v0), ValidationError);
}

TEST_CASE("MAR and mar_ratio are exact inverses") {
  std::mt19937_64 eng(5);
  std::uniform_real_distribution<double> dist(-4.0, 4.0);
  Matrix id = Matrix::Identity(6, 6);
  Vector v0 = Vector::Zero(6);
  for (int trial = 0; trial < 50; ++trial) {
    Vector x = Vector::Zero(6);
    for (Index i = 0; i < 4; ++i) {
      double g = dist(eng);
      while (std::abs(g) < 1e-3) g = dist(eng);
      x(i) = g;
    }
    auto stats = signal_stats(x, id, v0);
    CHECK(std::abs(stats.MAR * stats.mar_ratio * stats.mar_ratio - 1.0) <= 1e-12);
    CHECK(stats.mar_ratio >= 1.0 - 1e-15);
    CHECK(stats.MAR <= 1.0 + 1e-15);
  }
}

TEST_CASE("error rate definition") {
  CHECK(error_rate({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(error_rate({1, 2}, {5, 9}) == 1.0);
  CHECK(error_rate({0, 1, 2, 3}, {0, 1, 2, 9}) == 0.25);
  CHECK_THROWS_AS(error_rate({}, {1}), ValidationError);
}

TEST_CASE("error rate is invariant under relabeling") {
  std::mt19937_64 eng(17);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Index> labels(40);
    for (Index i = 0; i < 40; ++i) labels[static_cast<std::size_t>(i)] = i;
    std::shuffle(labels.begin(), labels.end(), eng);

    IndexSet truth{2, 5, 11, 19};
    IndexSet estimated{2, 7, 11, 31};
    auto relabel = [&labels](const IndexSet& s) {
      IndexSet out;
      for (Index j : s) out.push_back(labels[static_cast<std::size_t>(j)]);
      return out;
    };
    CHECK(error_rate(truth, estimated) ==
          error_rate(relabel(truth), relabel(estimated)));
  }
}

TEST_CASE("coefficient closed forms at pinned points") {
  // theta1 = 1/2, tau = 1, theta2 -> inf at delta = 1/2
  auto c = coefficients({0.5, 0.5, kInf, 1.0});
  CHECK(c.C1 == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(c.C2 == doctest::Approx(43.0 / 3.0).epsilon(1e-14));
  CHECK(c.C3 == 0.0);

  // theta1 = delta = 1/4
  auto c2 = coefficients({0.25, 0.25, kInf, 1.0});
  CHECK(c2.C1 == doctest::Approx(64.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("coefficient validation") {
  CHECK_THROWS_AS(coefficients({1.0, 0.5, kInf, 1.0}), ValidationError);
  CHECK_THROWS_AS(coefficients({0.5, 0.0, kInf, 1.0}), ValidationError);
  CHECK_THROWS_AS(coefficients({0.5, 1.0, kInf, 1.0}), ValidationError);
  CHECK_THROWS_AS(coefficients({0.5, 0.5, 0.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(coefficients({0.5, 0.5, kInf, 0.0}), ValidationError);
  CHECK_THROWS_AS(coefficients({-0.1, 0.5, kInf, 1.0}), ValidationError);
}

TEST_CASE("tau = 1 kills C3 and simplifies C1") {
  for (double delta : {0.05, 0.3, 0.6, 0.9}) {
    for (double theta1 : {0.1, 0.5, 0.9}) {
      for (double theta2 : {0.5, 2.0, kInf}) {
        auto c = coefficients({delta, theta1, theta2, 1.0});
        CHECK(c.C3 == 0.0);
        const double reduced =
            (1.0 / theta1 + 1.0 / theta2) / ((1.0 - theta1) * (1.0 - delta));
        CHECK(c.C1 == doctest::Approx(reduced).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("C3 never exceeds C2") {
  std::mt19937_64 eng(23);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  for (int trial = 0; trial < 200; ++trial) {
    BoundParams p{unit(eng), unit(eng), 1.0 / unit(eng), unit(eng)};
    auto c = coefficients(p);
    CHECK(c.C3 <= c.C2 * (1.0 + 1e-12));
    CHECK(c.C1 >= 0.0);
    CHECK(c.C2 >= 0.0);
    CHECK(c.C3 >= 0.0);
  }
}

TEST_CASE("error-rate bounds from coefficients") {
  SignalStats stats;
  stats.sparsity = 4;
  stats.x_min = 1.0;
  stats.x_max = 1.0;
  stats.mar_ratio = 1.0;
  stats.MAR = 1.0;
  stats.snr = 80.0;

  auto coeffs = coefficients(preset_params(BoundRule::corollary3, 0.5));
  auto bound = error_rate_bound(coeffs, stats);
  CHECK(bound.headline == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(bound.full == doctest::Approx(0.1 + 43.0 / 3.0).epsilon(1e-14));
  CHECK(bound.headline_clamped == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(bound.full_clamped == 1.0);  // the unsimplified bound is vacuous here

  stats.snr = kInf;
  CHECK(error_rate_bound(coeffs, stats).headline == 0.0);

  stats.snr = 0.0;
  CHECK_THROWS_AS(error_rate_bound(coeffs, stats), ValidationError);
}

TEST_CASE("headline never exceeds the full bound") {
  std::mt19937_64 eng(31);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  std::uniform_real_distribution<double> snr_dist(0.1, 1000.0);
  for (int trial = 0; trial < 200; ++trial) {
    auto c = coefficients({unit(eng), unit(eng), 1.0 / unit(eng), unit(eng)});
    SignalStats stats;
    stats.MAR = unit(eng);
    stats.mar_ratio = 1.0 / std::sqrt(stats.MAR);
    stats.snr = snr_dist(eng);
    auto bound = error_rate_bound(c, stats);
    CHECK(bound.headline <= bound.full + 1e-12);
  }
}

TEST_CASE("required snr closed forms") {
  CHECK(required_snr(BoundRule::corollary3, 0.5, 0.1, 1.0).snr ==
        doctest::Approx(80.0).epsilon(1e-14));
  CHECK(required_snr(BoundRule::corollary2, 0.2, 0.1, 1.0).snr ==
        doctest::Approx(78.125).epsilon(1e-14));

  auto cor1 = required_snr(BoundRule::corollary1, 0.25, 0.5, 1.0);
  CHECK(cor1.snr == doctest::Approx(std::pow(0.25, -1.5)).epsilon(1e-14));
  CHECK(cor1.error_bound == doctest::Approx(0.5 / 0.5625).epsilon(1e-14));

  // theorem1 with corollary-3 parameters and MAR < 1 scales by 1/MAR
  auto thm = required_snr(BoundRule::theorem1, 0.5, 0.1, 0.25,
                          BoundParams{0.5, 0.5, kInf, 1.0});
  CHECK(thm.snr == doctest::Approx(320.0).epsilon(1e-14));

  CHECK_THROWS_AS(required_snr(BoundRule::corollary3, 1.0, 0.1, 1.0),
                  ValidationError);
  CHECK_THROWS_AS(required_snr(BoundRule::corollary3, 0.5, 0.0, 1.0),
                  ValidationError);
  CHECK_THROWS_AS(required_snr(BoundRule::theorem1, 0.5, 0.1, 1.0),
                  ValidationError);  // params required
}

TEST_CASE("corollary consistency across a delta grid") {
  for (int i = 1; i <= 19; ++i) {
    const double delta = 0.05 * i;
    const double c_cor2 = coefficients(preset_params(BoundRule::corollary2, delta)).C1;
    CHECK(std::abs(c_cor2 - 1.0 / (delta * (1.0 - delta) * (1.0 - delta))) <= 1e-12);
    const double c_cor3 = coefficients(preset_params(BoundRule::corollary3, delta)).C1;
    CHECK(std::abs(c_cor3 - 4.0 / (1.0 - delta)) <= 1e-12);
  }
}

TEST_CASE("snr curve pointwise values and shape") {
  auto curve = snr_delta_curve(BoundRule::corollary3, 0.5, {0.1, 0.5, 0.9});
  REQUIRE(curve.size() == 3);
  CHECK(curve[0].second == doctest::Approx(80.0 / 9.0).epsilon(1e-14));
  CHECK(curve[1].second == doctest::Approx(16.0).epsilon(1e-14));
  CHECK(curve[2].second == doctest::Approx(80.0).epsilon(1e-14));

  auto grid = delta_grid(0.05, 0.95, 91);
  CHECK(snr_delta_curve(BoundRule::corollary2, 0.3, grid).size() == grid.size());

  CHECK_THROWS_AS(snr_delta_curve(BoundRule::corollary3, 0.5, {0.5, 0.5}),
                  ValidationError);
  CHECK_THROWS_AS(snr_delta_curve(BoundRule::corollary3, 0.5, {}), ValidationError);
}

TEST_CASE("corollary-2 curve has its interior minimum at one third") {
  // stationary point of delta (1-delta)^2
  auto grid = delta_grid(0.001, 0.999, 999);
  auto curve = snr_delta_curve(BoundRule::corollary2, 0.1, grid);
  std::size_t argmin = 0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (curve[i].second < curve[argmin].second) argmin = i;
  }
  CHECK(curve[argmin].first == doctest::Approx(1.0 / 3.0).epsilon(0.02));
  // strictly increasing past the minimum
  for (std::size_t i = argmin + 1; i < curve.size(); ++i) {
    CHECK(curve[i].second > curve[i - 1].second);
  }
}

TEST_CASE("constant comparison against the prior bound") {
  auto at_009 = compare_error_constants(0.09);
  CHECK(at_009.new_constant == doctest::Approx(1.0 / (0.91 * 0.91)).epsilon(1e-14));
  CHECK(at_009.old_constant == doctest::Approx(27.5).epsilon(1e-14));

  auto at_001 = compare_error_constants(0.01);
  CHECK(at_001.new_constant == doctest::Approx(1.0203040506070809).epsilon(1e-12));
  CHECK(at_001.old_constant == doctest::Approx(13.75).epsilon(1e-14));

  // limits toward zero
  auto tiny = compare_error_constants(1e-12);
  CHECK(tiny.new_constant == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(tiny.old_constant == doctest::Approx(11.0).epsilon(1e-5));

  for (double delta = 0.01; delta < 0.25; delta += 0.01) {
    auto cmp = compare_error_constants(delta);
    CHECK(cmp.new_constant < cmp.old_constant);
  }

  CHECK_THROWS_AS(compare_error_constants(0.25), DomainError);
  CHECK_THROWS_AS(compare_error_constants(0.3), DomainError);
  CHECK_THROWS_AS(compare_error_constants(0.0), DomainError);
}

TEST_CASE("unity crossing of the corollary-1 bound") {
  const double root = rho0_unity_crossing(1e-6);
  CHECK(root >= 0.270);
  CHECK(root <= 0.280);
  const double lhs = std::sqrt(root);
  const double rhs = (1.0 - root) * (1.0 - root);
  CHECK(std::abs(lhs - rhs) <= 1e-5);
}

TEST_CASE("curve CSV uses round-trip formatting") {
  auto curve = snr_delta_curve(BoundRule::corollary3, 0.3, {0.1, 0.2, 0.3});
  std::ostringstream os;
  write_curve_csv(os, curve);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == "delta,required_snr");
  for (const auto& [delta, snr] : curve) {
    std::string line;
    REQUIRE(std::getline(is, line));
    const auto comma = line.find(',');
    const double parsed_delta = std::strtod(line.substr(0, comma).c_str(), nullptr);
    const double parsed_snr = std::strtod(line.substr(comma + 1).c_str(), nullptr);
    CHECK(parsed_delta == delta);
    CHECK(parsed_snr == snr);
    // recomputing from the parsed abscissa reproduces the ordinate exactly
    CHECK(required_snr(BoundRule::corollary3, parsed_delta, 0.3, 1.0).snr ==
          parsed_snr);
  }
}
