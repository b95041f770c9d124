#pragma once

namespace ompbound {

/// Asymptotic recovery regime: n ambient dimensions, m measurements,
/// sparsity K, target error rate rho0, signal-to-noise ratio snr.
struct RecoveryRegime {
  int n;
  int m;
  int sparsity;
  double rho0;
  double snr;
};

struct SufficientRegion {
  bool snr_rho_ok;              // snr * rho0 >= e
  bool rate_ok;                 // m/n > K/n + 2 h(K/n) / log(snr rho0 / e)
  bool rate_domain_degenerate;  // log argument <= 1 made the rate check undefined
  double snr_rho_threshold;     // exp(2 n h(K/n) / (m - K) + 1)
  bool threshold_below_4;
};

/// Binary entropy in nats: -x ln x - (1-x) ln(1-x), with the endpoints
/// defined by continuity.
double binary_entropy(double x);

/// h(x, y) = x h(y) + (1-x) h(y / (1/x - 1)). The inner argument must land
/// in [0, 1]; values outside are a domain error, not clamped.
double joint_entropy(double x, double y);

/// Minimum snr any asymptotically reliable scheme needs:
/// exp((2n/m)(h(K/n) - h(K/n, rho0))) - 1. rho0 = 0 is allowed.
double necessary_snr(int n, int m, int sparsity, double rho0);

/// Inverse query of the same condition: minimum sampling rate m/n given snr.
double min_sampling_rate(int n, int sparsity, double rho0, double snr);

/// Largest target error rate for which the required-snr curve is sure to
/// clear the necessary-snr floor: 4 / (exp((2n/m) h(K/n)) - 1). Values
/// >= 1 mean every rho0 in (0,1) is feasible.
double feasibility_rho_max(int n, int m, int sparsity);

SufficientRegion sufficient_region(const RecoveryRegime& regime);

}  // namespace ompbound
