#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ompbound {

/// splitmix64 finalizer (Steele, Lea, Flood 2014). Used as the fixed
/// 64-bit mixing function for per-trial seed derivation.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stream seed for trial `index` and stream tag ('M' matrix, 'S' signal,
/// 'N' noise): base ^ mix64(mix64(index) ^ tag). Reproducible per trial
/// without replaying the sweep.
inline std::uint64_t derive_stream_seed(std::uint64_t base, std::uint64_t index,
                                        char tag) {
  return base ^ mix64(mix64(index) ^ static_cast<std::uint64_t>(tag));
}

/// Deterministic Gaussian source: mt19937_64 (fully specified by the
/// standard) driving an explicit Box-Muller transform, so the emitted
/// stream does not depend on the C++ library's distribution internals.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : eng_(seed) {}

  /// Uniform on (0, 1] with 53-bit resolution.
  double uniform_pos() {
    return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Uniform on [0, 1).
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double standard_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Uniform integer in [0, bound) by rejection, free of modulo bias and
  /// of any implementation-defined distribution adapter.
  std::uint64_t bounded(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = eng_();
      if (r >= threshold) return r % bound;
    }
  }

  bool coin() { return (eng_() & 1ULL) != 0; }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ompbound
