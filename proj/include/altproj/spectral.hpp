#pragma once

#include <vector>

#include "altproj/subspace.hpp"

namespace altproj {

// A positive operator in multiplication form over a finite atomic measure
// space: atom j carries weight weights[j], the operator multiplies by
// values[j], and eigenbasis.col(j) is the ambient vector U^{-1} applied to the
// indicator of atom j.
struct SpectralModel {
  std::vector<double> values;
  std::vector<double> weights;
  Matrix eigenbasis;
  double source_norm = 0.0;

  std::size_t atoms() const { return values.size(); }
  /// Throws std::invalid_argument unless sizes agree, weights are positive
  /// and the eigenbasis is orthonormal within 1e-10.
  void validate() const;
};

/// Eigendecomposition of a symmetric matrix with ascending values, unit
/// weights and each eigenvector's first nonzero entry made positive.
SpectralModel from_operator(const Matrix& t);

/// P_A P_B P_A as an explicit symmetric matrix.
Matrix t_from_projections(const Subspace& a, const Subspace& b);

/// Componentwise values[j]^k * coeffs[j].
Vector multiply_power(const SpectralModel& model, const Vector& coeffs, int k);

/// Total weight of the atoms with value >= threshold.
double mass_above(const SpectralModel& model, double threshold);

/// |T^k e| for the unit vector e of atom j, which is values[j]^k.
double power_norm_of_atom(const SpectralModel& model, std::size_t j, int k);

/// U^{-1}: sum_j coeffs[j] * eigenbasis.col(j).
Vector synthesize(const SpectralModel& model, const Vector& coeffs);
/// U restricted to span(eigenbasis): coordinates of x along each atom.
Vector analyze(const SpectralModel& model, const Vector& x);

}  // namespace altproj
