#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ompbound/numkernel.hpp"

namespace ompbound {

/// Scalar statistics of a sparse signal under a measurement model.
///
/// Two related ratios are carried side by side: mar_ratio =
/// ||x||_2 / (sqrt(K) x_min) >= 1, and MAR = K x_min^2 / ||x||_2^2 =
/// 1 / mar_ratio^2 in (0, 1], the conventional minimum-to-average ratio.
/// Error-rate bounds are evaluated in the form C1 / (snr * MAR), the
/// reading consistent with both the coefficient derivation and the
/// feasibility analysis.
struct SignalStats {
  int sparsity;      // K, number of nonzeros
  double x_min;      // smallest nonzero magnitude
  double x_max;      // largest nonzero magnitude
  double mar_ratio;  // >= 1
  double MAR;        // K x_min^2 / ||x||^2, in (0, 1]
  double snr;        // ||phi x||^2 / ||v||^2, +inf when v = 0
};

/// (delta, theta1, theta2, tau) feeding the coefficient closed forms.
/// theta2 may be +inf (its 1/theta2 term vanishes).
struct BoundParams {
  double delta;
  double theta1;
  double theta2;
  double tau;
};

struct Coefficients {
  double C1;
  double C2;
  double C3;
};

/// Error-rate bounds in both forms, raw and clamped to [0, 1]. Clamping is
/// never silent: the raw values are always carried alongside.
struct ErrorRateBound {
  double headline;  // C1 / (snr * MAR)
  double full;      // headline + C2 / MAR - C3
  double headline_clamped;
  double full_clamped;
};

enum class BoundRule { theorem1, corollary1, corollary2, corollary3 };

BoundRule bound_rule_from_string(const std::string& name);
std::string to_string(BoundRule rule);

struct RequiredSnr {
  double snr;
  double error_bound;  // the error rate guaranteed at that snr
};

struct ConstantComparison {
  double new_constant;  // 1 / (1 - delta)^2
  double old_constant;  // 11 / (1 - 2 sqrt(delta)), previously published
};

SignalStats signal_stats(const Vector& x, const Matrix& phi, const Vector& v);

/// |estimated \ true| / |true|. With equal-size sets this equals the
/// missed-detection fraction |true \ estimated| / |true|.
double error_rate(const IndexSet& true_support, const IndexSet& estimated_support);

/// Closed forms:
///   C1 = [1/theta1 + 1/theta2 + (1-tau)(1+delta)/tau^2] / ((1-theta1)(1-delta))
///   C2 = [(1+theta1)(1+delta) + 4 tau (1-delta)/(1+delta)] / ((1-theta1)(1-delta))
///   C3 = (1-tau) / ((1-theta1)(1+delta))
Coefficients coefficients(const BoundParams& params);

ErrorRateBound error_rate_bound(const Coefficients& coeffs, const SignalStats& stats);

/// Parameter presets realizing the named specializations through the
/// theorem-1 closed form: corollary1/2 use theta1 = delta, corollary3 uses
/// theta1 = 1/2; all use tau = 1, theta2 = +inf.
BoundParams preset_params(BoundRule rule, double delta);

/// Minimum snr guaranteeing error rate rho0:
///   theorem1:   C1(params) / (rho0 * MAR), params required
///   corollary1: MAR^-1 * delta^(-3/2), with implied bound sqrt(delta)/(1-delta)^2
///   corollary2: 1 / (delta (1-delta)^2 rho0)   (equal-magnitude case)
///   corollary3: 4 / ((1-delta) rho0)           (equal-magnitude case)
RequiredSnr required_snr(BoundRule rule, double delta, double rho0, double MAR,
                         const std::optional<BoundParams>& params = std::nullopt);

/// Pointwise required_snr over a strictly increasing grid in (0, 1).
std::vector<std::pair<double, double>> snr_delta_curve(
    BoundRule rule, double rho0, const std::vector<double>& delta_grid,
    double MAR = 1.0, const std::optional<BoundParams>& params = std::nullopt);

/// Evenly spaced grid of `steps` points from lo to hi inclusive.
std::vector<double> delta_grid(double lo, double hi, int steps);

/// New error constant vs the previously published one. Only defined on
/// delta in (0, 0.25): beyond that the old constant's denominator
/// 1 - 2 sqrt(delta) is nonpositive.
ConstantComparison compare_error_constants(double delta);

/// Unique root of sqrt(delta) = (1 - delta)^2 on (0, 1), by bisection.
/// Below this delta the corollary-1 error bound is at most 1.
double rho0_unity_crossing(double tol = 1e-12);

/// Curve CSV with header delta,required_snr, round-trip precision.
void write_curve_csv(std::ostream& out,
                     const std::vector<std::pair<double, double>>& curve);

}  // namespace ompbound
