#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "altproj/spectral.hpp"
#include "altproj/subspace.hpp"

namespace altproj {

/// Direct sum of 2-D blocks. Block j spans coordinates (2j, 2j+1) (0-based);
/// A holds a_j = u_{2j}, B holds b_j = cos(theta_j) u_{2j} + sin(theta_j) u_{2j+1}
/// with cos^2(theta_j) = sigmas[j]. T = P_A P_B P_A then has eigenpairs
/// (sigmas[j], a_j) and A ∩ B = {0}.
struct BlockAngleModel {
  std::vector<double> sigmas;
  Subspace a;
  Subspace b;
  SpectralModel spectral;
  /// Set when the model came from a named schedule: true iff that schedule's
  /// supremum stays below 1 as the block count grows.
  std::optional<bool> closed_sum;
};

/// sigmas must be non-empty, strictly ascending and inside (0, 1).
BlockAngleModel two_line_blocks(const std::vector<double>& sigmas);

enum class SigmaFamily { GeometricGap, HarmonicGap, PowerGap, Capped };

struct SigmaParams {
  double q = 0.5;       // geometric-gap ratio
  double p = 2.0;       // power-gap exponent
  double bound = 0.81;  // capped supremum
};

struct SigmaSchedule {
  SigmaFamily family;
  std::vector<double> values;
  /// Analytic label from the generator, never inferred from the values.
  bool closed_sum = false;
};

/// j = 1..N:
///   geometric-gap  1 - q^j
///   harmonic-gap   1 - 1/(j+1)
///   power-gap      1 - (j+1)^(-p)
///   capped         bound * j / N
/// Throws std::invalid_argument for bad parameters or when rounding would
/// push a value to 1 or break strict ascent.
SigmaSchedule sigma_schedules(SigmaFamily family, std::size_t N, const SigmaParams& params = {});
SigmaFamily parse_sigma_family(const std::string& name);
std::string sigma_family_name(SigmaFamily family);

BlockAngleModel block_model(const SigmaSchedule& schedule);

/// Truncation of the two-subspace family with C1 = span{u_2n + u_{2n-1}/n},
/// C2 = span{u_2n + u_{2n+1}/n} to R^N. Basis vectors u_k are 1-indexed in the
/// formulas and stored at coordinate k-1. A generator enters only when all of
/// its coordinates fit.
struct CounterexampleInstance {
  Index N = 0;
  Subspace c1;
  Subspace c2;
  Subspace e;
  Subspace f;
  std::vector<double> rho;          // rho_n = (1 + 1/(4n^2))^(-1/2)
  std::vector<Vector> e_prime;      // rho_n (u_4n + u_{4n-1}/(2n))
  std::vector<Vector> f_prime;      // rho_n (u_4n + u_{4n+1}/(2n))
  std::vector<Vector> perp_basis;   // u_1, u_{4n-2}, normalized -2n u_{4n-1} + u_4n - 2n u_{4n+1}
  Vector x;                         // u_6 + u_5/3
};

CounterexampleInstance counterexample(Index N);

struct RefutationReport {
  double x_distance_to_c1 = 0.0;   // |x - P_C1 x|
  double norm_pe_x = 0.0;          // |P_E x|
  double x_dot_f1 = 0.0;           // <x, f_1'>
  double decomposition_residual = 0.0;  // |x - P_E x - P_{A ∩ E^⊥ ∩ F^⊥} x|
  Index intersection_rank = 0;     // rank of C1 ∩ C2 at tol 1e-6
  bool x_in_c1 = false;
  bool pe_x_zero = false;
  bool x_not_in_f_perp = false;
  bool decomposition_fails = false;
  bool all_pass() const { return x_in_c1 && pe_x_zero && x_not_in_f_perp && decomposition_fails; }
};

/// Shows x lies in A = C1 and in E^⊥ but has a component outside
/// A ∩ E^⊥ ∩ F^⊥, so A != E ⊕ (A ∩ E^⊥ ∩ F^⊥).
RefutationReport refute_decomposition(const CounterexampleInstance& inst);

struct PerpCheckReport {
  double max_inner_with_ef = 0.0;   // max |<g, e_n'>|, |<g, f_n'>|
  double max_family_coupling = 0.0;  // max |<g_i, g_j>| over i != j
  std::size_t generators = 0;
  bool all_pass() const { return max_inner_with_ef <= 1e-10 && max_family_coupling <= 1e-10; }
};

PerpCheckReport perp_basis_check(const CounterexampleInstance& inst);

/// Random pair in R^d with ranks r1, r2 sharing exactly `overlap` directions.
/// Deterministic in seed.
std::pair<Subspace, Subspace> random_pair(Index d, Index r1, Index r2, Index overlap,
                                          std::uint64_t seed);

}  // namespace altproj
