#pragma once

#include <vector>

#include "altproj/subspace.hpp"

namespace altproj {

/// Error history of x -> P2 P1 x started at x.
///
/// errors[k-1] = |(P2 P1)^k x - P_M x| and kw_bounds[k-1] = c^(2k-1) |x| for
/// k = 1..n, where M = S1 ∩ S2 and c is the Friedrichs cosine of the pair.
struct IterationTrace {
  std::vector<double> errors;
  std::vector<double> kw_bounds;
  double start_norm = 0.0;
  double cosine = 0.0;

  std::size_t size() const { return errors.size(); }
  /// Largest amount by which errors[k+1] exceeds errors[k]; <= 0 when monotone.
  double worst_increase() const;
  /// Largest amount by which an error exceeds its kw_bound.
  double worst_bound_excess() const;
};

/// Runs n sweeps of alternating projections from x using explicit projections.
IterationTrace alternate(const Subspace& s1, const Subspace& s2, const Vector& x, int n,
                         double tol = kIntersectionTol);

/// |(P2 P1)^n - P_M| as the largest singular value of the explicit d x d matrix.
double composite_residual_norm(const Subspace& s1, const Subspace& s2, int n,
                               double tol = kIntersectionTol);

struct KwCheckRow {
  int n = 0;
  double residual_norm = 0.0;
  double predicted = 0.0;  // c^(2n-1)
  double discrepancy = 0.0;
  bool pass = false;
};

struct KwCheckReport {
  double cosine = 0.0;
  double effective_tol = 0.0;  // tol scaled by the ambient dimension
  std::vector<KwCheckRow> rows;
  bool all_pass() const;
  double max_discrepancy() const;
};

/// Compares |(P2 P1)^n - P_M| with c^(2n-1) for n = 1..n_max. Failures are
/// recorded per row, never thrown.
KwCheckReport kw_check(const Subspace& s1, const Subspace& s2, int n_max, double tol,
                       double intersect_tol = kIntersectionTol);

/// |(P2 P1)^k - P_M - (P_B P_A)^k| with A = S1 ∩ M^⊥ and B = S2 ∩ M^⊥.
double residual_identity_check(const Subspace& s1, const Subspace& s2, int k,
                               double tol = kIntersectionTol);

struct RateEstimate {
  double rate = 0.0;
  bool hit_zero = false;
};

/// Per-step factor exp(slope) of a least-squares line through log(errors) over
/// the last `window` steps. A trace that reached exact zero yields {0, true}.
RateEstimate rate_fit(const IterationTrace& trace, int window = 10);

}  // namespace altproj
