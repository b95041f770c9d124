#include "ompbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "ompbound/io.hpp"

namespace ompbound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

void require_open_unit(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    std::ostringstream os;
    os << name << " = " << v << " must lie in (0, 1)";
    throw ValidationError(os.str());
  }
}

}  // namespace

BoundRule bound_rule_from_string(const std::string& name) {
  if (name == "theorem1") return BoundRule::theorem1;
  if (name == "corollary1") return BoundRule::corollary1;
  if (name == "corollary2") return BoundRule::corollary2;
  if (name == "corollary3") return BoundRule::corollary3;
  throw ValidationError("unknown bound rule: " + name);
}

std::string to_string(BoundRule rule) {
  switch (rule) {
    case BoundRule::theorem1: return "theorem1";
    case BoundRule::corollary1: return "corollary1";
    case BoundRule::corollary2: return "corollary2";
    case BoundRule::corollary3: return "corollary3";
  }
  return "?";
}

SignalStats signal_stats(const Vector& x, const Matrix& phi, const Vector& v) {
  if (x.size() != phi.cols()) {
    throw ValidationError("signal_stats: signal length does not match matrix columns");
  }
  if (v.size() != phi.rows()) {
    throw ValidationError("signal_stats: noise length does not match matrix rows");
  }
  SignalStats stats;
  stats.sparsity = 0;
  stats.x_min = kInf;
  stats.x_max = 0.0;
  double norm_sq = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    const double mag = std::abs(x(i));
    if (mag == 0.0) continue;
    ++stats.sparsity;
    stats.x_min = std::min(stats.x_min, mag);
    stats.x_max = std::max(stats.x_max, mag);
    norm_sq += x(i) * x(i);
  }
  if (stats.sparsity == 0) {
    throw ValidationError("signal_stats: signal has no nonzero entries");
  }
  const double k = static_cast<double>(stats.sparsity);
  stats.mar_ratio = std::sqrt(norm_sq) / (std::sqrt(k) * stats.x_min);
  stats.MAR = k * stats.x_min * stats.x_min / norm_sq;

  const double signal_energy = (phi * x).squaredNorm();
  const double noise_energy = v.squaredNorm();
  stats.snr = noise_energy == 0.0 ? kInf : signal_energy / noise_energy;
  return stats;
}

double error_rate(const IndexSet& true_support, const IndexSet& estimated_support) {
  if (true_support.empty()) {
    throw ValidationError("error_rate: true support is empty");
  }
  IndexSet truth = true_support;
  std::sort(truth.begin(), truth.end());
  std::size_t wrong = 0;
  for (Index j : estimated_support) {
    if (!std::binary_search(truth.begin(), truth.end(), j)) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(truth.size());
}

Coefficients coefficients(const BoundParams& params) {
  if (!(params.delta >= 0.0 && params.delta < 1.0)) {
    throw ValidationError("coefficients: delta must lie in [0, 1)");
  }
  require_open_unit(params.theta1, "theta1");
  if (!(params.theta2 > 0.0)) {  // +inf allowed; its reciprocal vanishes
    throw ValidationError("coefficients: theta2 must be positive");
  }
  if (!(params.tau > 0.0 && params.tau <= 1.0)) {
    throw ValidationError("coefficients: tau must lie in (0, 1]");
  }
  const double delta = params.delta;
  const double theta1 = params.theta1;
  const double tau = params.tau;
  const double denom = (1.0 - theta1) * (1.0 - delta);

  Coefficients c;
  c.C1 = (1.0 / theta1 + 1.0 / params.theta2 +
          (1.0 - tau) * (1.0 + delta) / (tau * tau)) /
         denom;
  c.C2 = ((1.0 + theta1) * (1.0 + delta) + 4.0 * tau * (1.0 - delta) / (1.0 + delta)) /
         denom;
  c.C3 = (1.0 - tau) / ((1.0 - theta1) * (1.0 + delta));
  return c;
}

ErrorRateBound error_rate_bound(const Coefficients& coeffs, const SignalStats& stats) {
  if (!(stats.snr > 0.0)) {
    throw ValidationError("error_rate_bound: snr must be positive");
  }
  ErrorRateBound bound;
  bound.headline = coeffs.C1 / (stats.snr * stats.MAR);
  bound.full = bound.headline + coeffs.C2 / stats.MAR - coeffs.C3;
  bound.headline_clamped = clamp01(bound.headline);
  bound.full_clamped = clamp01(bound.full);
  return bound;
}

BoundParams preset_params(BoundRule rule, double delta) {
  switch (rule) {
    case BoundRule::corollary1:
    case BoundRule::corollary2:
      return {delta, delta, kInf, 1.0};
    case BoundRule::corollary3:
      return {delta, 0.5, kInf, 1.0};
    case BoundRule::theorem1:
      break;
  }
  throw ValidationError("preset_params: theorem1 takes explicit parameters");
}

RequiredSnr required_snr(BoundRule rule, double delta, double rho0, double MAR,
                         const std::optional<BoundParams>& params) {
  require_open_unit(delta, "delta");
  if (rule != BoundRule::corollary1) require_open_unit(rho0, "rho0");
  if (!(MAR > 0.0 && MAR <= 1.0)) {
    throw ValidationError("required_snr: MAR must lie in (0, 1]");
  }
  const double one_minus = 1.0 - delta;
  switch (rule) {
    case BoundRule::theorem1: {
      if (!params) {
        throw ValidationError("required_snr: theorem1 requires explicit parameters");
      }
      BoundParams p = *params;
      p.delta = delta;
      const double c1 = coefficients(p).C1;
      return {c1 / (rho0 * MAR), rho0};
    }
    case BoundRule::corollary1: {
      const double snr = (1.0 / MAR) * std::pow(delta, -1.5);
      const double bound = std::sqrt(delta) / (one_minus * one_minus);
      return {snr, bound};
    }
    case BoundRule::corollary2:
      return {1.0 / (delta * one_minus * one_minus * rho0), rho0};
    case BoundRule::corollary3:
      return {4.0 / (one_minus * rho0), rho0};
  }
  throw ValidationError("required_snr: unknown rule");
}

std::vector<std::pair<double, double>> snr_delta_curve(
    BoundRule rule, double rho0, const std::vector<double>& grid, double MAR,
    const std::optional<BoundParams>& params) {
  if (grid.empty()) throw ValidationError("snr_delta_curve: empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require_open_unit(grid[i], "delta");
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw ValidationError("snr_delta_curve: grid must be strictly increasing");
    }
  }
  std::vector<std::pair<double, double>> curve;
  curve.reserve(grid.size());
  for (double delta : grid) {
    curve.emplace_back(delta, required_snr(rule, delta, rho0, MAR, params).snr);
  }
  return curve;
}

std::vector<double> delta_grid(double lo, double hi, int steps) {
  if (steps < 2) throw ValidationError("delta_grid: need at least 2 steps");
  if (!(lo < hi)) throw ValidationError("delta_grid: lo must be below hi");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    grid.push_back(lo + (hi - lo) * static_cast<double>(i) /
                            static_cast<double>(steps - 1));
  }
  return grid;
}

ConstantComparison compare_error_constants(double delta) {
  if (!(delta > 0.0 && delta < 0.25)) {
    std::ostringstream os;
    os << "compare_error_constants: delta = " << delta
       << " outside (0, 0.25); at 0.25 the reference constant's denominator "
          "1 - 2*sqrt(delta) reaches zero and turns negative beyond";
    throw DomainError(os.str());
  }
  const double one_minus = 1.0 - delta;
  return {1.0 / (one_minus * one_minus), 11.0 / (1.0 - 2.0 * std::sqrt(delta))};
}

double rho0_unity_crossing(double tol) {
  // f(d) = sqrt(d) - (1-d)^2 is strictly increasing on (0, 1) with a sign
  // change, so plain bisection suffices.
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double f = std::sqrt(mid) - (1.0 - mid) * (1.0 - mid);
    if (f < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void write_curve_csv(std::ostream& out,
                     const std::vector<std::pair<double, double>>& curve) {
  out << "delta,required_snr\n";
  for (const auto& [delta, snr] : curve) {
    out << format_roundtrip(delta) << ',' << format_roundtrip(snr) << '\n';
  }
}

}  // namespace ompbound
