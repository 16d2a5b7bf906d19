#include "altproj/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace altproj {

namespace {

constexpr double kSymmetryTol = 1e-10;
// Entries below this magnitude are skipped when fixing eigenvector signs.
constexpr double kSignTol = 1e-12;

}  // namespace

void SpectralModel::validate() const {
  if (weights.size() != values.size()) {
    throw std::invalid_argument("SpectralModel: weights and values differ in length");
  }
  if (static_cast<std::size_t>(eigenbasis.cols()) != values.size()) {
    throw std::invalid_argument("SpectralModel: eigenbasis column count differs from atom count");
  }
  if (std::any_of(weights.begin(), weights.end(), [](double w) { return !(w > 0.0); })) {
    throw std::invalid_argument("SpectralModel: weights must be positive");
  }
  if (orthonormality_defect(eigenbasis) > kOrthonormalTol) {
    throw std::invalid_argument("SpectralModel: eigenbasis is not orthonormal");
  }
}

SpectralModel from_operator(const Matrix& t) {
  if (t.rows() != t.cols()) throw DimensionError("from_operator: matrix is not square");
  if (t.size() == 0) throw DimensionError("from_operator: empty matrix");
  const double skew = asymmetry(t);
  if (!(skew <= kSymmetryTol)) {
    throw std::invalid_argument("from_operator: matrix is not symmetric (max |T - T^T| = " +
                                std::to_string(skew) + ")");
  }
  const Matrix sym = 0.5 * (t + t.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("from_operator: eigendecomposition failed");
  }

  SpectralModel model;
  const Vector& ev = solver.eigenvalues();
  model.values.assign(ev.data(), ev.data() + ev.size());
  model.weights.assign(model.values.size(), 1.0);
  model.eigenbasis = solver.eigenvectors();
  for (Index j = 0; j < model.eigenbasis.cols(); ++j) {
    auto col = model.eigenbasis.col(j);
    for (Index i = 0; i < col.size(); ++i) {
      if (std::abs(col(i)) > kSignTol) {
        if (col(i) < 0) col *= -1.0;
        break;
      }
    }
  }
  model.source_norm = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  return model;
}

Matrix t_from_projections(const Subspace& a, const Subspace& b) {
  require_same_dim(a.ambient_dim(), b.ambient_dim(), "t_from_projections");
  const Matrix cross = a.basis().transpose() * b.basis();
  const Matrix inner = cross * cross.transpose();
  Matrix t = a.basis() * inner * a.basis().transpose();
  return 0.5 * (t + t.transpose());
}

Vector multiply_power(const SpectralModel& model, const Vector& coeffs, int k) {
  if (static_cast<std::size_t>(coeffs.size()) != model.atoms()) {
    throw DimensionError("multiply_power: coefficient count differs from atom count");
  }
  if (k < 0) throw std::invalid_argument("multiply_power: k must be nonnegative");
  Vector out = coeffs;
  for (Index j = 0; j < out.size(); ++j) out(j) *= std::pow(model.values[j], k);
  return out;
}

double mass_above(const SpectralModel& model, double threshold) {
  double mass = 0.0;
  for (std::size_t j = 0; j < model.atoms(); ++j) {
    if (model.values[j] >= threshold) mass += model.weights[j];
  }
  return mass;
}

double power_norm_of_atom(const SpectralModel& model, std::size_t j, int k) {
  if (j >= model.atoms()) {
    throw std::out_of_range("power_norm_of_atom: atom index " + std::to_string(j) +
                            " out of range (" + std::to_string(model.atoms()) + " atoms)");
  }
  if (k < 1) throw std::invalid_argument("power_norm_of_atom: k must be >= 1");
  return std::pow(std::abs(model.values[j]), k);
}

Vector synthesize(const SpectralModel& model, const Vector& coeffs) {
  if (static_cast<std::size_t>(coeffs.size()) != model.atoms()) {
    throw DimensionError("synthesize: coefficient count differs from atom count");
  }
  return model.eigenbasis * coeffs;
}

Vector analyze(const SpectralModel& model, const Vector& x) {
  require_same_dim(x.size(), model.eigenbasis.rows(), "analyze");
  return model.eigenbasis.transpose() * x;
}

}  // namespace altproj
