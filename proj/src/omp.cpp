#include "ompbound/omp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "ompbound/io.hpp"

namespace ompbound {

namespace {

void validate_problem(const Problem& p) {
  if (p.y.size() != p.phi.rows()) {
    throw ValidationError("omp_run: measurement length does not match matrix rows");
  }
  if (p.sparsity < 1) {
    throw ValidationError("omp_run: sparsity budget must be positive");
  }
  if (p.sparsity > std::min(p.phi.rows(), p.phi.cols())) {
    std::ostringstream os;
    os << "omp_run: sparsity " << p.sparsity << " exceeds min(" << p.phi.rows()
       << ", " << p.phi.cols() << ")";
    throw ValidationError(os.str());
  }
}

/// ceil(tau * K) with protection against representation noise in tau * K:
/// products within 1e-9 of an integer are treated as that integer.
Index ceil_tau_k(double tau, std::size_t sparsity) {
  const double product = tau * static_cast<double>(sparsity);
  const double nearest = std::round(product);
  if (std::abs(product - nearest) < 1e-9) return static_cast<Index>(nearest);
  return static_cast<Index>(std::ceil(product));
}

}  // namespace

Index select_index(const Matrix& phi, const Vector& r, const IndexSet& excluded) {
  if (r.size() != phi.rows()) {
    throw ValidationError("select_index: residual length does not match matrix rows");
  }
  std::vector<char> skip(static_cast<std::size_t>(phi.cols()), 0);
  for (Index j : excluded) {
    if (j < 0 || j >= phi.cols()) {
      throw ValidationError("select_index: excluded index out of range");
    }
    skip[static_cast<std::size_t>(j)] = 1;
  }
  Index best = -1;
  double best_abs = -1.0;
  for (Index j = 0; j < phi.cols(); ++j) {
    if (skip[static_cast<std::size_t>(j)]) continue;
    const double c = std::abs(phi.col(j).dot(r));
    if (c > best_abs) {
      best_abs = c;
      best = j;
    }
  }
  if (best < 0) throw ValidationError("select_index: every column is excluded");
  return best;
}

OmpOutput omp_run(const Problem& problem) {
  validate_problem(problem);
  const Matrix& phi = problem.phi;

  OmpOutput out;
  out.support.reserve(static_cast<std::size_t>(problem.sparsity));
  out.trace.reserve(static_cast<std::size_t>(problem.sparsity));
  Vector residual = problem.y;

  for (int k = 1; k <= problem.sparsity; ++k) {
    const double max_corr = (phi.transpose() * residual).cwiseAbs().maxCoeff();
    const Index chosen = select_index(phi, residual, out.support);
    out.support.push_back(chosen);

    LeastSquaresFit fit;
    try {
      fit = least_squares_on_support(phi, problem.y, out.support);
    } catch (const DegeneracyError& e) {
      out.support.pop_back();
      std::ostringstream os;
      os << "omp_run: iteration " << k << ": " << e.what();
      throw OmpDegeneracyError(os.str(), out.trace);
    }
    residual = fit.residual;

    IterationRecord rec;
    rec.k = k;
    rec.chosen_index = chosen;
    rec.max_abs_correlation = max_corr;
    rec.residual_norm_sq = residual.squaredNorm();
    rec.estimate = fit.coeffs;
    out.trace.push_back(std::move(rec));
  }

  out.x_hat = Vector::Zero(phi.cols());
  const Vector& final_coeffs = out.trace.back().estimate;
  for (std::size_t i = 0; i < out.support.size(); ++i) {
    out.x_hat(out.support[i]) = final_coeffs(static_cast<Index>(i));
  }
  return out;
}

MissedSetStats missed_set_stats(const Vector& x, const IndexSet& true_support,
                                const IndexSet& estimated_support, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw ValidationError("missed_set_stats: tau must lie in (0, 1]");
  }
  MissedSetStats stats;
  stats.tau = tau;

  std::vector<char> estimated(static_cast<std::size_t>(x.size()), 0);
  for (Index j : estimated_support) {
    if (j >= 0 && j < x.size()) estimated[static_cast<std::size_t>(j)] = 1;
  }
  for (Index j : true_support) {
    if (j < 0 || j >= x.size()) {
      throw ValidationError("missed_set_stats: support index out of range");
    }
    if (!estimated[static_cast<std::size_t>(j)]) stats.gamma.push_back(j);
  }
  std::sort(stats.gamma.begin(), stats.gamma.end());

  const Index want = ceil_tau_k(tau, true_support.size());
  if (want > static_cast<Index>(stats.gamma.size())) {
    stats.gamma_tau = stats.gamma;
    stats.x_tau = 0.0;
    return stats;
  }

  // Largest-magnitude members of gamma; ties resolved toward the smaller
  // index so the result is reproducible.
  IndexSet ranked = stats.gamma;
  std::stable_sort(ranked.begin(), ranked.end(), [&x](Index a, Index b) {
    const double ma = std::abs(x(a));
    const double mb = std::abs(x(b));
    if (ma != mb) return ma > mb;
    return a < b;
  });
  ranked.resize(static_cast<std::size_t>(want));
  stats.x_tau = std::abs(x(ranked.back()));
  std::sort(ranked.begin(), ranked.end());
  stats.gamma_tau = std::move(ranked);
  return stats;
}

std::vector<bool> residual_decrease_diagnostic(const Vector& y,
                                               const OmpOutput& out,
                                               double delta1) {
  if (delta1 < 0.0) {
    throw ValidationError("residual_decrease_diagnostic: delta1 must be >= 0");
  }
  std::vector<bool> flags;
  flags.reserve(out.trace.size());
  double prev_norm_sq = y.squaredNorm();
  for (const IterationRecord& rec : out.trace) {
    const double drop = prev_norm_sq - rec.residual_norm_sq;
    const double floor =
        rec.max_abs_correlation * rec.max_abs_correlation / (1.0 + delta1);
    flags.push_back(drop >= floor - 1e-10);
    prev_norm_sq = rec.residual_norm_sq;
  }
  return flags;
}

IndexSet support_of(const Vector& x) {
  IndexSet support;
  for (Index i = 0; i < x.size(); ++i) {
    if (x(i) != 0.0) support.push_back(i);
  }
  return support;
}

void write_trace_csv(std::ostream& out, const std::vector<IterationRecord>& trace) {
  out << "k,chosen_index,max_abs_correlation,residual_norm_sq\n";
  for (const IterationRecord& rec : trace) {
    out << rec.k << ',' << rec.chosen_index << ','
        << format_roundtrip(rec.max_abs_correlation) << ','
        << format_roundtrip(rec.residual_norm_sq) << '\n';
  }
}

}  // namespace ompbound
