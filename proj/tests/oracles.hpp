#pragma once

// Reference computations used only by the tests. They avoid the library's
// code paths (and Eigen's decompositions) so they can check them.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Cyclic Jacobi rotations on a symmetric matrix. Returns eigenvalues in
/// ascending order; `vectors` (if given) receives matching columns.
inline std::vector<double> jacobi_eigen(Matrix a, Matrix* vectors = nullptr) {
  const Eigen::Index n = a.rows();
  Matrix v = Matrix::Identity(n, n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<Eigen::Index> order(n);
  for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return a(i, i) < a(j, j); });
  std::vector<double> values;
  Matrix sorted(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    values.push_back(a(order[i], order[i]));
    sorted.col(i) = v.col(order[i]);
  }
  if (vectors) *vectors = sorted;
  return values;
}

/// Largest singular value as sqrt of the top eigenvalue of M^T M.
inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const auto values = jacobi_eigen(m.transpose() * m);
  return std::sqrt(std::max(0.0, values.back()));
}

/// Singular values (descending) of a general matrix via the Gram matrix.
inline std::vector<double> singular_values(const Matrix& m) {
  auto values = jacobi_eigen(m.transpose() * m);
  std::vector<double> out;
  for (auto it = values.rbegin(); it != values.rend(); ++it) out.push_back(std::sqrt(std::max(0.0, *it)));
  return out;
}

/// Projector onto the column span of an arbitrary (full column rank) matrix.
inline Matrix projector_of(const Matrix& spanning) {
  if (spanning.cols() == 0) return Matrix::Zero(spanning.rows(), spanning.rows());
  return spanning * (spanning.transpose() * spanning).inverse() * spanning.transpose();
}

inline Matrix power(const Matrix& m, int k) {
  Matrix r = Matrix::Identity(m.rows(), m.cols());
  for (int i = 0; i < k; ++i) r = r * m;
  return r;
}

/// Lines through the origin in R^2 at angles phi1, phi2.
inline Matrix line_projector(double phi) {
  Matrix p(2, 2);
  p << std::cos(phi) * std::cos(phi), std::cos(phi) * std::sin(phi), std::cos(phi) * std::sin(phi),
      std::sin(phi) * std::sin(phi);
  return p;
}

}  // namespace oracle
