#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "altproj/spectral.hpp"
#include "altproj/subspace.hpp"

namespace altproj {

/// Raised for schedules that are not positive, non-increasing and below 1.
/// index is the 1-based position of the first offending entry.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::size_t index, const std::string& what)
      : std::invalid_argument(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// No eigenvalue is left for bin n (1-based) at the required level alpha_n^2.
class SpectrumExhausted : public std::runtime_error {
 public:
  SpectrumExhausted(std::size_t n, double level);
  std::size_t n() const { return n_; }
  double level() const { return level_; }

 private:
  std::size_t n_;
  double level_;
};

/// Finite prefix lambda_1 >= lambda_2 >= ... > 0 with lambda_1 < 1.
class LambdaSchedule {
 public:
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  /// 1-based access, matching step numbers k.
  double at(std::size_t k) const { return values_.at(k - 1); }

 private:
  friend LambdaSchedule validate_lambda(std::vector<double> values);
  std::vector<double> values_;
};

LambdaSchedule validate_lambda(std::vector<double> values);

enum class LambdaGenerator { Reciprocal, ReciprocalSqrt, Power, Geometric };

/// lambda_k for k = 1..K: 1/(k+1), (k+1)^(-1/2), (k+1)^(-param), param^k.
LambdaSchedule generate_lambda(LambdaGenerator gen, std::size_t K, double param = 0.0);
LambdaGenerator parse_lambda_generator(const std::string& name);

/// s_k: the largest integer with s_k * lambda_k < 1, evaluated with the same
/// double multiplication used to check it.
std::vector<std::int64_t> compute_s(const LambdaSchedule& lambda);

/// Distinct values t_n of s with the first and last step (1-based) k0(n),
/// k1(n) at which each occurs.
struct BlockIndex {
  std::vector<std::int64_t> t;
  std::vector<std::size_t> k0;
  std::vector<std::size_t> k1;
};
BlockIndex compute_t_k0_k1(const std::vector<std::int64_t>& s);

/// alpha_n = (lambda_{k0(n)} t_n)^(1 / (2 k1(n))). Throws std::logic_error if
/// 0 < alpha_n < 1 or 1 > lambda_{k0} t_n >= 1 - lambda_{k0} fails.
std::vector<double> compute_alpha(const LambdaSchedule& lambda, const BlockIndex& blocks);

/// Greedy choice of strictly increasing atom indices (0-based) with
/// spectrum[j(n)] >= alpha_n^2 and spectrum[j(n)] > spectrum[j(n-1)].
/// `spectrum` must be ascending and below 1.
std::vector<std::size_t> select_bins(const std::vector<double>& spectrum,
                                     const std::vector<double>& alpha);

struct SlowPointPlan {
  std::vector<std::int64_t> s;
  std::vector<std::int64_t> t;
  std::vector<std::size_t> k0;
  std::vector<std::size_t> k1;
  std::vector<double> alpha;
  std::vector<std::size_t> bins;
  std::size_t valid_k_max = 0;

  /// Block n (0-based) with k0(n) <= k <= k1(n).
  std::size_t block_of_step(std::size_t k) const;
};

/// Claims 1-2 plus bin selection against `spectrum` (ascending).
SlowPointPlan make_plan(const LambdaSchedule& lambda, const std::vector<double>& spectrum);

struct SlowPoint {
  std::vector<double> coefficients;  // 1/t_n, one per bin
  Vector vector;
  double norm = 0.0;
};

/// x = sum_n eigenbasis.col(bins[n]) / t_n.
SlowPoint assemble_slow_point(const SpectralModel& model, const SlowPointPlan& plan);

struct BoundRow {
  std::size_t k = 0;
  std::size_t n = 0;         // 1-based block index
  double lambda_k = 0.0;
  double t_bound = 0.0;      // alpha_n^(2k) / t_n
  double t_norm = 0.0;       // |T^k x| = |P_A (P_B P_A)^k x|
  double spectral_norm = 0.0;  // sqrt(sum_n values[bins[n]]^(2k) / t_n^2)
  double pba_norm = 0.0;     // |(P_B P_A)^k x|
  double margin = 0.0;       // pba_norm - lambda_k
  bool pass = false;
};

struct BoundReport {
  std::vector<BoundRow> rows;
  std::optional<std::size_t> first_failure;  // step k of the first violated bound
  bool ok() const { return !first_failure.has_value(); }
  double min_margin() const;
};

/// Checks |T^k x| >= alpha_n^(2k)/t_n and |(P_B P_A)^k x| >= lambda_k for
/// k = 1..K, applying T and P_B P_A through explicit projections.
BoundReport verify_lower_bounds(const SpectralModel& model, const Subspace& a, const Subspace& b,
                                const SlowPoint& x, const SlowPointPlan& plan,
                                const LambdaSchedule& lambda, std::size_t K,
                                double slack = 1e-10);

}  // namespace altproj
