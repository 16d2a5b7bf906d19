#include "altproj/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "altproj/rng.hpp"

namespace altproj {

namespace {

// Standard basis vector u_k of R^N with the 1-based index used in formulas.
Vector unit(Index N, Index k) {
  Vector u = Vector::Zero(N);
  u(k - 1) = 1.0;
  return u;
}

Subspace span_of(Index N, const std::vector<Vector>& vectors) {
  return orthonormalize(N, vectors, 1e-12);
}

}  // namespace

BlockAngleModel two_line_blocks(const std::vector<double>& sigmas) {
  if (sigmas.empty()) throw std::invalid_argument("two_line_blocks: no blocks");
  for (std::size_t j = 0; j < sigmas.size(); ++j) {
    if (!(sigmas[j] > 0.0 && sigmas[j] < 1.0)) {
      throw std::invalid_argument("two_line_blocks: sigma_" + std::to_string(j + 1) +
                                  " outside (0, 1)");
    }
    if (j > 0 && !(sigmas[j] > sigmas[j - 1])) {
      throw std::invalid_argument("two_line_blocks: sigmas must be strictly ascending");
    }
  }
  const auto blocks = static_cast<Index>(sigmas.size());
  const Index d = 2 * blocks;
  Matrix qa = Matrix::Zero(d, blocks);
  Matrix qb = Matrix::Zero(d, blocks);
  for (Index j = 0; j < blocks; ++j) {
    const double sigma = sigmas[j];
    qa(2 * j, j) = 1.0;
    qb(2 * j, j) = std::sqrt(sigma);
    qb(2 * j + 1, j) = std::sqrt(1.0 - sigma);
  }
  SpectralModel spectral;
  spectral.values = sigmas;
  spectral.weights.assign(sigmas.size(), 1.0);
  spectral.eigenbasis = qa;
  spectral.source_norm = sigmas.back();

  return BlockAngleModel{sigmas, Subspace(d, std::move(qa)), Subspace(d, std::move(qb)),
                         std::move(spectral), std::nullopt};
}

SigmaFamily parse_sigma_family(const std::string& name) {
  if (name == "geometric-gap") return SigmaFamily::GeometricGap;
  if (name == "harmonic-gap") return SigmaFamily::HarmonicGap;
  if (name == "power-gap") return SigmaFamily::PowerGap;
  if (name == "capped") return SigmaFamily::Capped;
  throw std::invalid_argument("unknown sigma schedule '" + name + "'");
}

std::string sigma_family_name(SigmaFamily family) {
  switch (family) {
    case SigmaFamily::GeometricGap: return "geometric-gap";
    case SigmaFamily::HarmonicGap: return "harmonic-gap";
    case SigmaFamily::PowerGap: return "power-gap";
    case SigmaFamily::Capped: return "capped";
  }
  return "unknown";
}

SigmaSchedule sigma_schedules(SigmaFamily family, std::size_t N, const SigmaParams& params) {
  if (N < 1) throw std::invalid_argument("sigma_schedules: N must be >= 1");
  SigmaSchedule schedule{family, {}, family == SigmaFamily::Capped};
  switch (family) {
    case SigmaFamily::GeometricGap:
      if (!(params.q > 0.0 && params.q < 1.0)) {
        throw std::invalid_argument("geometric-gap: q must lie in (0, 1)");
      }
      break;
    case SigmaFamily::PowerGap:
      if (!(params.p > 0.0)) throw std::invalid_argument("power-gap: p must be positive");
      break;
    case SigmaFamily::Capped:
      if (!(params.bound > 0.0 && params.bound < 1.0)) {
        throw std::invalid_argument("capped: bound must lie in (0, 1)");
      }
      break;
    case SigmaFamily::HarmonicGap: break;
  }
  schedule.values.reserve(N);
  for (std::size_t i = 1; i <= N; ++i) {
    const double j = static_cast<double>(i);
    double v = 0.0;
    switch (family) {
      case SigmaFamily::GeometricGap: v = 1.0 - std::pow(params.q, j); break;
      case SigmaFamily::HarmonicGap: v = 1.0 - 1.0 / (j + 1.0); break;
      case SigmaFamily::PowerGap: v = 1.0 - std::pow(j + 1.0, -params.p); break;
      case SigmaFamily::Capped: v = params.bound * j / static_cast<double>(N); break;
    }
    if (!(v > 0.0 && v < 1.0) || (!schedule.values.empty() && !(v > schedule.values.back()))) {
      throw std::invalid_argument(sigma_family_name(family) + ": value " + std::to_string(i) +
                                  " of " + std::to_string(N) +
                                  " is not representable inside (0, 1) in ascending order");
    }
    schedule.values.push_back(v);
  }
  return schedule;
}

BlockAngleModel block_model(const SigmaSchedule& schedule) {
  BlockAngleModel model = two_line_blocks(schedule.values);
  model.closed_sum = schedule.closed_sum;
  return model;
}

CounterexampleInstance counterexample(Index N) {
  if (N < 8) throw std::invalid_argument("counterexample: N must be >= 8, got " + std::to_string(N));
  std::vector<Vector> c1_span, c2_span;
  for (Index n = 1; 2 * n <= N; ++n) {
    c1_span.push_back(unit(N, 2 * n) + unit(N, 2 * n - 1) / static_cast<double>(n));
  }
  for (Index n = 1; 2 * n + 1 <= N; ++n) {
    c2_span.push_back(unit(N, 2 * n) + unit(N, 2 * n + 1) / static_cast<double>(n));
  }

  CounterexampleInstance inst{N,
                              span_of(N, c1_span),
                              span_of(N, c2_span),
                              Subspace(N),
                              Subspace(N),
                              {},
                              {},
                              {},
                              {},
                              Vector::Zero(N)};

  inst.perp_basis.push_back(unit(N, 1));
  for (Index n = 1; 4 * n - 2 <= N; ++n) inst.perp_basis.push_back(unit(N, 4 * n - 2));
  for (Index n = 1; 4 * n + 1 <= N; ++n) {
    const double two_n = 2.0 * static_cast<double>(n);
    const double rho = 1.0 / std::sqrt(1.0 + 1.0 / (two_n * two_n));
    inst.rho.push_back(rho);
    inst.e_prime.push_back(rho * (unit(N, 4 * n) + unit(N, 4 * n - 1) / two_n));
    inst.f_prime.push_back(rho * (unit(N, 4 * n) + unit(N, 4 * n + 1) / two_n));
    const Vector g = -two_n * unit(N, 4 * n - 1) + unit(N, 4 * n) - two_n * unit(N, 4 * n + 1);
    inst.perp_basis.push_back(g / g.norm());
  }
  inst.e = span_of(N, inst.e_prime);
  inst.f = span_of(N, inst.f_prime);
  inst.x = unit(N, 6) + unit(N, 5) / 3.0;
  return inst;
}

RefutationReport refute_decomposition(const CounterexampleInstance& inst) {
  RefutationReport r;
  const Vector& x = inst.x;
  r.x_distance_to_c1 = (x - project(inst.c1, x)).norm();
  r.x_in_c1 = r.x_distance_to_c1 <= 1e-12;

  const Vector pe_x = project(inst.e, x);
  r.norm_pe_x = pe_x.norm();
  r.pe_x_zero = r.norm_pe_x <= 1e-10;

  r.x_dot_f1 = x.dot(inst.f_prime.front());
  r.x_not_in_f_perp = std::abs(r.x_dot_f1 - 1.0 / (3.0 * std::sqrt(5.0))) <= 1e-12 &&
                      r.x_dot_f1 != 0.0;

  r.intersection_rank = intersect(inst.c1, inst.c2, 1e-6).rank();
  // A = C1 ∩ (C1 ∩ C2)^⊥, which is C1 itself when the intersection is trivial.
  const Subspace a = complement_within(inst.c1, intersect(inst.c1, inst.c2, 1e-6));
  std::vector<Vector> ef(inst.e_prime);
  ef.insert(ef.end(), inst.f_prime.begin(), inst.f_prime.end());
  const Subspace e_plus_f = orthonormalize(inst.N, ef, 1e-12);
  const Subspace a_perp = complement_within(a, e_plus_f, 1e-10);
  r.decomposition_residual = (x - pe_x - project(a_perp, x)).norm();
  r.decomposition_fails = r.decomposition_residual > 0.1;
  return r;
}

PerpCheckReport perp_basis_check(const CounterexampleInstance& inst) {
  PerpCheckReport r;
  r.generators = inst.perp_basis.size();
  for (std::size_t i = 0; i < inst.perp_basis.size(); ++i) {
    const Vector& g = inst.perp_basis[i];
    for (const Vector& e : inst.e_prime) r.max_inner_with_ef = std::max(r.max_inner_with_ef, std::abs(g.dot(e)));
    for (const Vector& f : inst.f_prime) r.max_inner_with_ef = std::max(r.max_inner_with_ef, std::abs(g.dot(f)));
    for (std::size_t j = i + 1; j < inst.perp_basis.size(); ++j) {
      r.max_family_coupling = std::max(r.max_family_coupling, std::abs(g.dot(inst.perp_basis[j])));
    }
  }
  return r;
}

std::pair<Subspace, Subspace> random_pair(Index d, Index r1, Index r2, Index overlap,
                                          std::uint64_t seed) {
  if (d < 1 || r1 < 0 || r2 < 0 || overlap < 0 || overlap > std::min(r1, r2) ||
      r1 + r2 - overlap > d) {
    throw std::invalid_argument("random_pair: infeasible ranks (d=" + std::to_string(d) +
                                ", r1=" + std::to_string(r1) + ", r2=" + std::to_string(r2) +
                                ", overlap=" + std::to_string(overlap) + ")");
  }
  Rng rng(seed);
  const Matrix q = Eigen::HouseholderQR<Matrix>(rng.normal_matrix(d, d)).householderQ();
  Subspace s1(d, q.leftCols(r1));

  std::vector<Vector> spanning;
  for (Index i = 0; i < overlap; ++i) spanning.emplace_back(q.col(i));
  const Matrix mix = rng.normal_matrix(d - overlap, r2 - overlap);
  for (Index i = 0; i < r2 - overlap; ++i) {
    spanning.emplace_back(q.rightCols(d - overlap) * mix.col(i));
  }
  Subspace s2 = orthonormalize(d, spanning, 1e-12);
  if (s2.rank() != r2) throw std::runtime_error("random_pair: degenerate draw");
  return {std::move(s1), std::move(s2)};
}

}  // namespace altproj
