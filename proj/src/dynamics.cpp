#include "altproj/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace altproj {

namespace {

void require_positive(int n, const char* what) {
  if (n < 1) throw std::invalid_argument(std::string(what) + " must be >= 1");
}

Matrix matrix_power(const Matrix& m, int n) {
  Matrix result = Matrix::Identity(m.rows(), m.cols());
  Matrix base = m;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

}  // namespace

double IterationTrace::worst_increase() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < errors.size(); ++k) worst = std::max(worst, errors[k] - errors[k - 1]);
  return errors.size() < 2 ? 0.0 : worst;
}

double IterationTrace::worst_bound_excess() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < errors.size(); ++k) worst = std::max(worst, errors[k] - kw_bounds[k]);
  return worst;
}

IterationTrace alternate(const Subspace& s1, const Subspace& s2, const Vector& x, int n,
                         double tol) {
  require_same_dim(s1.ambient_dim(), s2.ambient_dim(), "alternate");
  require_same_dim(x.size(), s1.ambient_dim(), "alternate");
  require_positive(n, "alternate: n");

  const PrincipalDecomposition pd = principal_decomposition(s1, s2);
  const AngleReport angles = angle_report(pd, tol);
  const Vector limit = project(intersect(s1.ambient_dim(), pd, tol), x);

  IterationTrace trace;
  trace.start_norm = x.norm();
  trace.cosine = angles.friedrichs_cosine;
  trace.errors.reserve(n);
  trace.kw_bounds.reserve(n);

  Vector iterate = x;
  for (int k = 1; k <= n; ++k) {
    iterate = project(s2, project(s1, iterate));
    trace.errors.push_back((iterate - limit).norm());
    trace.kw_bounds.push_back(std::pow(trace.cosine, 2 * k - 1) * trace.start_norm);
  }
  return trace;
}

double composite_residual_norm(const Subspace& s1, const Subspace& s2, int n, double tol) {
  require_same_dim(s1.ambient_dim(), s2.ambient_dim(), "composite_residual_norm");
  require_positive(n, "composite_residual_norm: n");
  const Matrix sweep = s2.projector() * s1.projector();
  return operator_norm(matrix_power(sweep, n) - intersect(s1, s2, tol).projector());
}

bool KwCheckReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const KwCheckRow& r) { return r.pass; });
}

double KwCheckReport::max_discrepancy() const {
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, r.discrepancy);
  return worst;
}

KwCheckReport kw_check(const Subspace& s1, const Subspace& s2, int n_max, double tol,
                       double intersect_tol) {
  require_same_dim(s1.ambient_dim(), s2.ambient_dim(), "kw_check");
  require_positive(n_max, "kw_check: n_max");
  KwCheckReport report;
  report.cosine = angle_report(s1, s2, intersect_tol).friedrichs_cosine;
  report.effective_tol = tol * static_cast<double>(s1.ambient_dim());

  const Matrix sweep = s2.projector() * s1.projector();
  const Matrix p_m = intersect(s1, s2, intersect_tol).projector();
  Matrix power = sweep;
  for (int n = 1; n <= n_max; ++n) {
    if (n > 1) power = power * sweep;
    KwCheckRow row;
    row.n = n;
    row.residual_norm = operator_norm(power - p_m);
    row.predicted = std::pow(report.cosine, 2 * n - 1);
    row.discrepancy = std::abs(row.residual_norm - row.predicted);
    row.pass = row.discrepancy <= report.effective_tol;
    report.rows.push_back(row);
  }
  return report;
}

double residual_identity_check(const Subspace& s1, const Subspace& s2, int k, double tol) {
  require_same_dim(s1.ambient_dim(), s2.ambient_dim(), "residual_identity_check");
  require_positive(k, "residual_identity_check: k");
  const ReducedPair reduced = reduce_by_intersection(s1, s2, tol);
  const Matrix lhs = matrix_power(s2.projector() * s1.projector(), k) - reduced.intersection.projector();
  const Matrix rhs = matrix_power(reduced.b.projector() * reduced.a.projector(), k);
  return operator_norm(lhs - rhs);
}

RateEstimate rate_fit(const IterationTrace& trace, int window) {
  require_positive(window, "rate_fit: window");
  if (std::any_of(trace.errors.begin(), trace.errors.end(), [](double e) { return e == 0.0; })) {
    return {0.0, true};
  }
  const auto count = static_cast<std::size_t>(window) + 1;
  if (trace.errors.size() < count) {
    throw std::invalid_argument("rate_fit: trace shorter than window + 1");
  }
  // Least squares fit of log(e_k) = a + b k over the tail.
  const std::size_t first = trace.errors.size() - count;
  double sum_k = 0, sum_y = 0, sum_kk = 0, sum_ky = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const double k = static_cast<double>(i);
    const double y = std::log(trace.errors[first + i]);
    sum_k += k;
    sum_y += y;
    sum_kk += k * k;
    sum_ky += k * y;
  }
  const double m = static_cast<double>(count);
  const double slope = (m * sum_ky - sum_k * sum_y) / (m * sum_kk - sum_k * sum_k);
  return {std::exp(slope), false};
}

}  // namespace altproj
