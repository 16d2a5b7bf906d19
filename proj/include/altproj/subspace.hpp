#pragma once

#include <span>
#include <vector>

#include "altproj/linalg.hpp"

namespace altproj {

/// Cosines at or above 1 - tol are treated as intersection directions.
inline constexpr double kIntersectionTol = 1e-8;
inline constexpr double kOrthonormalTol = 1e-10;

/// Finite-dimensional subspace of R^d held as an orthonormal basis (one basis
/// vector per column). Immutable once built.
class Subspace {
 public:
  /// The zero subspace of R^ambient_dim.
  explicit Subspace(Index ambient_dim);

  /// Takes ownership of an ambient_dim x rank matrix with orthonormal columns.
  /// Throws std::invalid_argument if |<q_i, q_j> - delta_ij| > tol for some pair.
  Subspace(Index ambient_dim, Matrix basis, double tol = kOrthonormalTol);

  Index ambient_dim() const { return ambient_dim_; }
  Index rank() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }
  Vector basis_vector(Index i) const { return basis_.col(i); }

  /// Dense orthogonal projector Q Q^T.
  Matrix projector() const;

  /// Whole space R^d.
  static Subspace full(Index ambient_dim);

 private:
  Index ambient_dim_;
  Matrix basis_;
};

/// Largest |<q_i, q_j> - delta_ij| over the columns of `basis`.
double orthonormality_defect(const Matrix& basis);

/// Modified Gram-Schmidt with one reorthogonalization pass, in input order.
/// Vectors whose residual norm is <= tol are dropped.
Subspace orthonormalize(std::span<const Vector> spanning, double tol = kOrthonormalTol);
Subspace orthonormalize(Index ambient_dim, std::span<const Vector> spanning,
                        double tol = kOrthonormalTol);

/// Nearest point of span(s) to x.
Vector project(const Subspace& s, const Vector& x);

/// Principal cosines (non-increasing) with matching principal vectors.
/// left.col(i) lies in s1, right.col(i) in s2, and <left_i, right_i> = cosines(i).
struct PrincipalDecomposition {
  Vector cosines;
  Matrix left;
  Matrix right;
};
PrincipalDecomposition principal_decomposition(const Subspace& s1, const Subspace& s2);

/// span of principal-vector pairs with cosine >= 1 - tol.
Subspace intersect(const Subspace& s1, const Subspace& s2, double tol = kIntersectionTol);
Subspace intersect(Index ambient_dim, const PrincipalDecomposition& pd, double tol);

/// Orthonormal basis of s ∩ w^⊥. Directions of s whose component along w has
/// norm <= tol count as orthogonal to w.
Subspace complement_within(const Subspace& s, const Subspace& w, double tol = kIntersectionTol);

struct AngleReport {
  double friedrichs_cosine = 0.0;
  std::vector<double> principal_cosines;
  Index intersection_rank = 0;
};

/// Friedrichs cosine is the largest principal cosine below 1 - tol, or 0 when
/// every principal direction is shared (sup over the empty set).
AngleReport angle_report(const Subspace& s1, const Subspace& s2, double tol = kIntersectionTol);
AngleReport angle_report(const PrincipalDecomposition& pd, double tol);

/// The pair (A, B) = (s1 ∩ M^⊥, s2 ∩ M^⊥) with M = s1 ∩ s2.
struct ReducedPair {
  Subspace intersection;
  Subspace a;
  Subspace b;
};
ReducedPair reduce_by_intersection(const Subspace& s1, const Subspace& s2,
                                   double tol = kIntersectionTol);

}  // namespace altproj
