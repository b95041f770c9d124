#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "ompbound/numkernel.hpp"

namespace ompbound {

/// A support-recovery instance: measurements y = phi*x + v with sparsity
/// budget K. Only K <= min(m, n) is enforced; K <= m <= n is the intended
/// regime.
struct Problem {
  Matrix phi;
  Vector y;
  int sparsity;
};

struct IterationRecord {
  int k;                       // 1-based iteration index
  Index chosen_index;          // t^k
  double max_abs_correlation;  // ||phi' r^{k-1}||_inf
  double residual_norm_sq;     // ||r^k||_2^2
  Vector estimate;             // coefficients on the support so far, in selection order
};

struct OmpOutput {
  IndexSet support;  // T^K in selection order
  Vector x_hat;      // length n, zero outside the support
  std::vector<IterationRecord> trace;
};

/// Missed-detection quantities after a partial recovery: gamma is the set
/// of true support indices not yet selected, gamma_tau its ceil(tau*K)
/// largest-magnitude members and x_tau the corresponding threshold
/// magnitude (0 when gamma is too small to contain ceil(tau*K) entries).
struct MissedSetStats {
  IndexSet gamma;
  IndexSet gamma_tau;
  double x_tau;
  double tau;
};

/// Raised when a least-squares step hits a rank-deficient subset; carries
/// the trace of the iterations completed before the failure.
class OmpDegeneracyError : public DegeneracyError {
 public:
  OmpDegeneracyError(const std::string& msg, std::vector<IterationRecord> trace)
      : DegeneracyError(msg), partial_trace(std::move(trace)) {}
  std::vector<IterationRecord> partial_trace;
};

/// Index of the non-excluded column maximizing |<phi_i, r>|; exact ties go
/// to the smallest index.
Index select_index(const Matrix& phi, const Vector& r, const IndexSet& excluded);

/// Runs exactly `sparsity` iterations of greedy selection with a full
/// least-squares re-fit per step. No early stopping: a zero residual makes
/// all correlations zero and the tie-break picks the smallest unused index.
OmpOutput omp_run(const Problem& problem);

MissedSetStats missed_set_stats(const Vector& x, const IndexSet& true_support,
                                const IndexSet& estimated_support, double tau);

/// Per-iteration check that the residual energy drop is at least
/// ||phi' r^{k-1}||_inf^2 / (1 + delta1), with tolerance 1e-10. delta1 is
/// the order-1 isometry constant, max_i |  ||phi_i||^2 - 1 |. Diagnostic
/// only; the flags are reported, not asserted.
std::vector<bool> residual_decrease_diagnostic(const Vector& y,
                                               const OmpOutput& out,
                                               double delta1);

/// Indices of the nonzero entries of x, ascending.
IndexSet support_of(const Vector& x);

/// Trace CSV with header k,chosen_index,max_abs_correlation,residual_norm_sq.
void write_trace_csv(std::ostream& out, const std::vector<IterationRecord>& trace);

}  // namespace ompbound
