#include "ompbound/infotheory.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ompbound/errors.hpp"

namespace ompbound {

namespace {

void validate_dims(int n, int m, int sparsity) {
  if (!(sparsity >= 1 && sparsity < m && m < n)) {
    std::ostringstream os;
    os << "recovery regime requires 1 <= K < m < n, got K = " << sparsity
       << ", m = " << m << ", n = " << n;
    throw ValidationError(os.str());
  }
}

/// (2n/m) * (h(K/n) - h(K/n, rho0)), the shared exponent of the necessary
/// conditions. rho0 = 0 contributes a joint term of exactly zero, keeping
/// the feasibility identity 4 / necessary_snr(rho0 = 0) exact.
double recovery_exponent(int n, int m, int sparsity, double rho0) {
  const double ratio = static_cast<double>(sparsity) / static_cast<double>(n);
  const double joint = rho0 == 0.0 ? 0.0 : joint_entropy(ratio, rho0);
  return 2.0 * static_cast<double>(n) / static_cast<double>(m) *
         (binary_entropy(ratio) - joint);
}

}  // namespace

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream os;
    os << "binary_entropy: argument " << x << " outside [0, 1]";
    throw ValidationError(os.str());
  }
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log(x) - (1.0 - x) * std::log(1.0 - x);
}

double joint_entropy(double x, double y) {
  if (!(x > 0.0 && x < 1.0)) {
    std::ostringstream os;
    os << "joint_entropy: first argument " << x << " outside (0, 1)";
    throw ValidationError(os.str());
  }
  if (!(y >= 0.0 && y <= 1.0)) {
    std::ostringstream os;
    os << "joint_entropy: second argument " << y << " outside [0, 1]";
    throw DomainError(os.str());
  }
  const double inner = y / (1.0 / x - 1.0);
  if (!(inner >= 0.0 && inner <= 1.0)) {
    std::ostringstream os;
    os << "joint_entropy: inner argument y/(1/x - 1) = " << inner
       << " outside [0, 1]";
    throw DomainError(os.str());
  }
  return x * binary_entropy(y) + (1.0 - x) * binary_entropy(inner);
}

double necessary_snr(int n, int m, int sparsity, double rho0) {
  validate_dims(n, m, sparsity);
  if (!(rho0 >= 0.0 && rho0 < 1.0)) {
    throw ValidationError("necessary_snr: rho0 must lie in [0, 1)");
  }
  return std::expm1(recovery_exponent(n, m, sparsity, rho0));
}

double min_sampling_rate(int n, int sparsity, double rho0, double snr) {
  if (!(sparsity >= 1 && sparsity < n)) {
    throw ValidationError("min_sampling_rate: requires 1 <= K < n");
  }
  if (!(rho0 >= 0.0 && rho0 < 1.0)) {
    throw ValidationError("min_sampling_rate: rho0 must lie in [0, 1)");
  }
  if (!(snr > 0.0)) {
    throw ValidationError("min_sampling_rate: snr must be positive");
  }
  const double ratio = static_cast<double>(sparsity) / static_cast<double>(n);
  const double joint = rho0 == 0.0 ? 0.0 : joint_entropy(ratio, rho0);
  return (binary_entropy(ratio) - joint) / (0.5 * std::log1p(snr));
}

double feasibility_rho_max(int n, int m, int sparsity) {
  validate_dims(n, m, sparsity);
  return 4.0 / std::expm1(recovery_exponent(n, m, sparsity, 0.0));
}

SufficientRegion sufficient_region(const RecoveryRegime& regime) {
  validate_dims(regime.n, regime.m, regime.sparsity);
  if (!(regime.rho0 > 0.0 && regime.rho0 < 1.0)) {
    throw ValidationError("sufficient_region: rho0 must lie in (0, 1)");
  }
  if (!(regime.snr > 0.0)) {
    throw ValidationError("sufficient_region: snr must be positive");
  }
  const double n = regime.n;
  const double m = regime.m;
  const double ratio = static_cast<double>(regime.sparsity) / n;
  const double entropy = binary_entropy(ratio);
  const double product = regime.snr * regime.rho0;

  SufficientRegion region;
  region.snr_rho_ok = product >= std::numbers::e;
  region.rate_domain_degenerate = product <= std::numbers::e;
  if (region.rate_domain_degenerate) {
    // log(snr rho0 / e) <= 0: the rate inequality has no valid reading, so
    // it is reported unmet rather than clamped.
    region.rate_ok = false;
  } else {
    region.rate_ok = m / n > ratio + 2.0 * entropy / std::log(product / std::numbers::e);
  }
  region.snr_rho_threshold =
      std::exp(2.0 * n * entropy / (m - static_cast<double>(regime.sparsity)) + 1.0);
  region.threshold_below_4 = region.snr_rho_threshold < 4.0;
  return region;
}

}  // namespace ompbound
