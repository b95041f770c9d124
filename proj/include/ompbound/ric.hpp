#pragma once

#include <cstdint>

#include "ompbound/numkernel.hpp"

namespace ompbound {

struct RicResult {
  int order;
  double delta;      // max over examined subsets of max(l_max - 1, 1 - l_min)
  IndexSet witness;  // lexicographically first subset achieving delta
  std::uint64_t subsets_examined;
  bool exact;      // true iff every size-`order` subset was examined
  bool rip_holds;  // delta < 1; delta is reported raw either way
};

inline constexpr std::uint64_t kDefaultRicCap = 1'000'000;

/// C(n, k), saturating at `limit` to avoid overflow.
std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t limit);

/// Exact order-K restricted isometry constant by exhaustive lexicographic
/// enumeration of column subsets. Gram blocks are formed as given (no
/// column normalization) and passed to extreme_eigenvalues. Raises
/// CapacityError with the subset count when C(cols, order) exceeds cap.
RicResult ric_exact(const Matrix& phi, int order, std::uint64_t cap = kDefaultRicCap);

/// Monte Carlo lower bound: the maximum deviation over `samples` distinct
/// uniformly drawn subsets. Never exceeds the exact constant. Requests of
/// at least C(cols, order) samples are clamped to exhaustive enumeration.
RicResult ric_sampled_lower_bound(const Matrix& phi, int order,
                                  std::uint64_t samples, std::uint64_t seed);

}  // namespace ompbound
