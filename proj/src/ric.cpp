#include "ompbound/ric.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "ompbound/rng.hpp"

namespace ompbound {

namespace {

/// Deviation of one Gram block from the identity: max(l_max - 1, 1 - l_min).
/// Always >= 0 since l_min <= l_max.
double subset_deviation(const Matrix& gram, const IndexSet& subset) {
  const Index k = static_cast<Index>(subset.size());
  Matrix block(k, k);
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) {
      block(i, j) = gram(subset[static_cast<std::size_t>(i)],
                         subset[static_cast<std::size_t>(j)]);
    }
  }
  const SpectrumExtremes ext = extreme_eigenvalues(block);
  return std::max(ext.lambda_max - 1.0, 1.0 - ext.lambda_min);
}

/// Advances `subset` to the next size-k combination of {0..n-1} in
/// lexicographic order; returns false past the last one.
bool next_combination(IndexSet& subset, Index n) {
  const int k = static_cast<int>(subset.size());
  for (int i = k - 1; i >= 0; --i) {
    if (subset[static_cast<std::size_t>(i)] < n - static_cast<Index>(k - i)) {
      ++subset[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j) {
        subset[static_cast<std::size_t>(j)] =
            subset[static_cast<std::size_t>(j - 1)] + 1;
      }
      return true;
    }
  }
  return false;
}

void validate_order(const Matrix& phi, int order) {
  if (order < 1) throw ValidationError("ric: order must be positive");
  if (order > phi.cols()) {
    std::ostringstream os;
    os << "ric: order " << order << " exceeds column count " << phi.cols();
    throw ValidationError(os.str());
  }
}

RicResult exhaustive_scan(const Matrix& phi, int order) {
  const Matrix gram = phi.transpose() * phi;
  IndexSet subset(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) subset[static_cast<std::size_t>(i)] = i;

  RicResult result;
  result.order = order;
  result.delta = -1.0;
  result.subsets_examined = 0;
  result.exact = true;
  do {
    const double dev = subset_deviation(gram, subset);
    ++result.subsets_examined;
    if (dev > result.delta) {
      result.delta = dev;
      result.witness = subset;
    }
  } while (next_combination(subset, phi.cols()));
  result.rip_holds = result.delta < 1.0;
  return result;
}

}  // namespace

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t limit) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;  // exact at every step: c = C(n-k+i, i)
    if (c >= limit) return limit;
  }
  return static_cast<std::uint64_t>(c);
}

RicResult ric_exact(const Matrix& phi, int order, std::uint64_t cap) {
  validate_order(phi, order);
  // count saturates far above any sensible cap so the error can report it
  constexpr std::uint64_t kCountSaturation = 1'000'000'000'000'000'000ULL;
  const std::uint64_t count = binomial_capped(
      static_cast<std::uint64_t>(phi.cols()), static_cast<std::uint64_t>(order),
      kCountSaturation);
  if (count > cap) {
    std::ostringstream os;
    os << "ric_exact: C(" << phi.cols() << ", " << order << ") = ";
    if (count == kCountSaturation) {
      os << ">= " << kCountSaturation;
    } else {
      os << count;
    }
    os << " exceeds cap " << cap;
    throw CapacityError(os.str());
  }
  return exhaustive_scan(phi, order);
}

RicResult ric_sampled_lower_bound(const Matrix& phi, int order,
                                  std::uint64_t samples, std::uint64_t seed) {
  validate_order(phi, order);
  if (samples < 1) {
    throw ValidationError("ric_sampled_lower_bound: samples must be >= 1");
  }
  const std::uint64_t total = binomial_capped(
      static_cast<std::uint64_t>(phi.cols()), static_cast<std::uint64_t>(order),
      samples + 1);
  if (samples >= total) {
    return exhaustive_scan(phi, order);
  }

  const Matrix gram = phi.transpose() * phi;
  GaussianSampler rng(seed);
  const Index n = phi.cols();
  std::set<IndexSet> seen;
  IndexSet pool(static_cast<std::size_t>(n));

  RicResult result;
  result.order = order;
  result.delta = -1.0;
  result.subsets_examined = 0;
  result.exact = false;
  while (result.subsets_examined < samples) {
    // Partial Fisher-Yates draw of `order` distinct indices, canonicalized
    // by sorting; repeats of a whole subset are rejected.
    for (Index i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
    IndexSet subset(static_cast<std::size_t>(order));
    for (int i = 0; i < order; ++i) {
      const std::uint64_t pick =
          static_cast<std::uint64_t>(i) +
          rng.bounded(static_cast<std::uint64_t>(n) - static_cast<std::uint64_t>(i));
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick)]);
      subset[static_cast<std::size_t>(i)] = pool[static_cast<std::size_t>(i)];
    }
    std::sort(subset.begin(), subset.end());
    if (!seen.insert(subset).second) continue;

    const double dev = subset_deviation(gram, subset);
    ++result.subsets_examined;
    if (dev > result.delta) {
      result.delta = dev;
      result.witness = subset;
    }
  }
  result.rip_holds = result.delta < 1.0;
  return result;
}

}  // namespace ompbound
