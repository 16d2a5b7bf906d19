#include "altproj/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace altproj {

namespace {

void require_positive_dim(Index d) {
  if (d < 1) throw DimensionError("ambient dimension must be positive, got " + std::to_string(d));
}

}  // namespace

Subspace::Subspace(Index ambient_dim) : ambient_dim_(ambient_dim), basis_(ambient_dim, 0) {
  require_positive_dim(ambient_dim);
}

Subspace::Subspace(Index ambient_dim, Matrix basis, double tol)
    : ambient_dim_(ambient_dim), basis_(std::move(basis)) {
  require_positive_dim(ambient_dim);
  if (basis_.cols() == 0) basis_.resize(ambient_dim, 0);
  require_same_dim(basis_.rows(), ambient_dim, "Subspace");
  if (basis_.cols() > ambient_dim) {
    throw std::invalid_argument("Subspace: rank exceeds ambient dimension");
  }
  const double defect = orthonormality_defect(basis_);
  if (!(defect <= tol)) {
    throw std::invalid_argument("Subspace: basis is not orthonormal (defect " +
                                std::to_string(defect) + ")");
  }
}

Matrix Subspace::projector() const { return basis_ * basis_.transpose(); }

Subspace Subspace::full(Index ambient_dim) {
  require_positive_dim(ambient_dim);
  return Subspace(ambient_dim, Matrix::Identity(ambient_dim, ambient_dim));
}

double orthonormality_defect(const Matrix& basis) {
  if (basis.cols() == 0) return 0.0;
  const Matrix gram = basis.transpose() * basis;
  return (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

Subspace orthonormalize(std::span<const Vector> spanning, double tol) {
  if (spanning.empty()) {
    throw std::invalid_argument("orthonormalize: cannot infer ambient dimension from no vectors");
  }
  return orthonormalize(spanning.front().size(), spanning, tol);
}

Subspace orthonormalize(Index ambient_dim, std::span<const Vector> spanning, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("orthonormalize: tol must be positive");
  require_positive_dim(ambient_dim);
  Matrix q(ambient_dim, std::min<Index>(ambient_dim, static_cast<Index>(spanning.size())));
  Index rank = 0;
  for (const Vector& v : spanning) {
    require_same_dim(v.size(), ambient_dim, "orthonormalize");
    Vector r = v;
    for (int pass = 0; pass < 2; ++pass) {
      for (Index j = 0; j < rank; ++j) r -= q.col(j).dot(r) * q.col(j);
    }
    const double norm = r.norm();
    if (norm <= tol || rank == ambient_dim) continue;
    q.col(rank++) = r / norm;
  }
  return Subspace(ambient_dim, q.leftCols(rank));
}

Vector project(const Subspace& s, const Vector& x) {
  require_same_dim(x.size(), s.ambient_dim(), "project");
  if (s.rank() == 0) return Vector::Zero(x.size());
  return s.basis() * (s.basis().transpose() * x);
}

PrincipalDecomposition principal_decomposition(const Subspace& s1, const Subspace& s2) {
  require_same_dim(s1.ambient_dim(), s2.ambient_dim(), "principal_decomposition");
  const Index d = s1.ambient_dim();
  const Index m = std::min(s1.rank(), s2.rank());
  if (m == 0) return {Vector(0), Matrix(d, 0), Matrix(d, 0)};
  const Matrix gram = s1.basis().transpose() * s2.basis();
  Eigen::BDCSVD<Matrix> svd(gram, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Vector cosines = svd.singularValues().head(m).cwiseMin(1.0).cwiseMax(0.0);
  return {std::move(cosines), s1.basis() * svd.matrixU().leftCols(m),
          s2.basis() * svd.matrixV().leftCols(m)};
}

Subspace intersect(const Subspace& s1, const Subspace& s2, double tol) {
  return intersect(s1.ambient_dim(), principal_decomposition(s1, s2), tol);
}

Subspace intersect(Index ambient_dim, const PrincipalDecomposition& pd, double tol) {
  std::vector<Vector> shared;
  for (Index i = 0; i < pd.cosines.size() && pd.cosines(i) >= 1.0 - tol; ++i) {
    shared.emplace_back(0.5 * (pd.left.col(i) + pd.right.col(i)));
  }
  return orthonormalize(ambient_dim, shared, 0.5);
}

Subspace complement_within(const Subspace& s, const Subspace& w, double tol) {
  require_same_dim(s.ambient_dim(), w.ambient_dim(), "complement_within");
  if (w.rank() == 0 || s.rank() == 0) return s;
  const Matrix g = w.basis().transpose() * s.basis();
  Eigen::JacobiSVD<Matrix> svd(g, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  Index kept = 0;
  while (kept < sv.size() && sv(kept) > tol) ++kept;
  const Matrix null_dirs = svd.matrixV().rightCols(s.rank() - kept);
  return Subspace(s.ambient_dim(), s.basis() * null_dirs);
}

AngleReport angle_report(const Subspace& s1, const Subspace& s2, double tol) {
  return angle_report(principal_decomposition(s1, s2), tol);
}

AngleReport angle_report(const PrincipalDecomposition& pd, double tol) {
  AngleReport report;
  report.principal_cosines.assign(pd.cosines.data(), pd.cosines.data() + pd.cosines.size());
  for (double c : report.principal_cosines) {
    if (c >= 1.0 - tol) {
      ++report.intersection_rank;
    } else {
      report.friedrichs_cosine = c;
      break;
    }
  }
  return report;
}

ReducedPair reduce_by_intersection(const Subspace& s1, const Subspace& s2, double tol) {
  Subspace m = intersect(s1, s2, tol);
  Subspace a = complement_within(s1, m, tol);
  Subspace b = complement_within(s2, m, tol);
  return {std::move(m), std::move(a), std::move(b)};
}

}  // namespace altproj
