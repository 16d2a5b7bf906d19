#include "altproj/slowpoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace altproj {

SpectrumExhausted::SpectrumExhausted(std::size_t n, double level)
    : std::runtime_error("spectrum exhausted at n = " + std::to_string(n) +
                         " (needs an eigenvalue >= " + std::to_string(level) + ")"),
      n_(n),
      level_(level) {}

LambdaSchedule validate_lambda(std::vector<double> values) {
  if (values.empty()) throw ValidationError(1, "lambda schedule is empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    const std::string at = "lambda_" + std::to_string(i + 1);
    if (!std::isfinite(v) || !(v > 0.0)) throw ValidationError(i + 1, at + " must be positive");
    if (i == 0 && !(v < 1.0)) throw ValidationError(1, at + " must be < 1");
    if (i > 0 && v > values[i - 1]) {
      throw ValidationError(i + 1, at + " exceeds its predecessor (not non-increasing)");
    }
  }
  LambdaSchedule schedule;
  schedule.values_ = std::move(values);
  return schedule;
}

LambdaGenerator parse_lambda_generator(const std::string& name) {
  if (name == "reciprocal") return LambdaGenerator::Reciprocal;
  if (name == "reciprocal-sqrt") return LambdaGenerator::ReciprocalSqrt;
  if (name == "power") return LambdaGenerator::Power;
  if (name == "geometric") return LambdaGenerator::Geometric;
  throw std::invalid_argument("unknown lambda generator '" + name + "'");
}

LambdaSchedule generate_lambda(LambdaGenerator gen, std::size_t K, double param) {
  if (K == 0) throw std::invalid_argument("lambda generator: K must be >= 1");
  if (gen == LambdaGenerator::Power && !(param > 0.0)) {
    throw std::invalid_argument("power generator: exponent must be positive");
  }
  if (gen == LambdaGenerator::Geometric && !(param > 0.0 && param < 1.0)) {
    throw std::invalid_argument("geometric generator: ratio must lie in (0, 1)");
  }
  std::vector<double> values(K);
  for (std::size_t i = 0; i < K; ++i) {
    const double k = static_cast<double>(i + 1);
    switch (gen) {
      case LambdaGenerator::Reciprocal: values[i] = 1.0 / (k + 1.0); break;
      case LambdaGenerator::ReciprocalSqrt: values[i] = 1.0 / std::sqrt(k + 1.0); break;
      case LambdaGenerator::Power: values[i] = std::pow(k + 1.0, -param); break;
      case LambdaGenerator::Geometric: values[i] = std::pow(param, k); break;
    }
  }
  return validate_lambda(std::move(values));
}

std::vector<std::int64_t> compute_s(const LambdaSchedule& lambda) {
  constexpr double kMaxInverse = 0x1.0p52;
  std::vector<std::int64_t> s;
  s.reserve(lambda.size());
  for (double l : lambda.values()) {
    if (1.0 / l > kMaxInverse) {
      throw std::domain_error("compute_s: lambda too small for exact integer arithmetic");
    }
    auto below_one = [l](std::int64_t m) { return static_cast<double>(m) * l < 1.0; };
    auto sk = static_cast<std::int64_t>(std::ceil(1.0 / l)) - 1;
    sk = std::max<std::int64_t>(sk, 1);
    while (below_one(sk + 1)) ++sk;
    while (sk > 1 && !below_one(sk)) --sk;
    s.push_back(sk);
  }
  return s;
}

BlockIndex compute_t_k0_k1(const std::vector<std::int64_t>& s) {
  BlockIndex blocks;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 1) throw std::invalid_argument("compute_t_k0_k1: s must be positive");
    if (!blocks.t.empty() && s[i] < blocks.t.back()) {
      throw std::invalid_argument("compute_t_k0_k1: s must be non-decreasing");
    }
    if (blocks.t.empty() || s[i] != blocks.t.back()) {
      blocks.t.push_back(s[i]);
      blocks.k0.push_back(i + 1);
      blocks.k1.push_back(i + 1);
    } else {
      blocks.k1.back() = i + 1;
    }
  }
  return blocks;
}

std::vector<double> compute_alpha(const LambdaSchedule& lambda, const BlockIndex& blocks) {
  std::vector<double> alpha;
  alpha.reserve(blocks.t.size());
  for (std::size_t n = 0; n < blocks.t.size(); ++n) {
    const double l0 = lambda.at(blocks.k0[n]);
    const double product = l0 * static_cast<double>(blocks.t[n]);
    if (!(product < 1.0) || product < 1.0 - l0 - 1e-12) {
      throw std::logic_error("compute_alpha: lambda_k0 * t_n out of [1 - lambda_k0, 1) at n = " +
                             std::to_string(n + 1));
    }
    const double a = std::pow(product, 1.0 / (2.0 * static_cast<double>(blocks.k1[n])));
    if (!(a > 0.0 && a < 1.0)) {
      throw std::logic_error("compute_alpha: alpha out of (0, 1) at n = " + std::to_string(n + 1));
    }
    alpha.push_back(a);
  }
  return alpha;
}

std::vector<std::size_t> select_bins(const std::vector<double>& spectrum,
                                     const std::vector<double>& alpha) {
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    if (!(spectrum[j] < 1.0)) throw std::invalid_argument("select_bins: spectrum must lie below 1");
    if (j > 0 && spectrum[j] < spectrum[j - 1]) {
      throw std::invalid_argument("select_bins: spectrum must be ascending");
    }
  }
  std::vector<std::size_t> bins;
  bins.reserve(alpha.size());
  std::size_t j = 0;
  for (std::size_t n = 0; n < alpha.size(); ++n) {
    const double level = alpha[n] * alpha[n];
    while (j < spectrum.size() &&
           (spectrum[j] < level || (!bins.empty() && spectrum[j] <= spectrum[bins.back()]))) {
      ++j;
    }
    if (j == spectrum.size()) throw SpectrumExhausted(n + 1, level);
    bins.push_back(j++);
  }
  return bins;
}

std::size_t SlowPointPlan::block_of_step(std::size_t k) const {
  for (std::size_t n = 0; n < t.size(); ++n) {
    if (k0[n] <= k && k <= k1[n]) return n;
  }
  throw std::out_of_range("step " + std::to_string(k) + " is not covered by the plan");
}

SlowPointPlan make_plan(const LambdaSchedule& lambda, const std::vector<double>& spectrum) {
  SlowPointPlan plan;
  plan.s = compute_s(lambda);
  BlockIndex blocks = compute_t_k0_k1(plan.s);
  plan.alpha = compute_alpha(lambda, blocks);
  plan.bins = select_bins(spectrum, plan.alpha);
  plan.t = std::move(blocks.t);
  plan.k0 = std::move(blocks.k0);
  plan.k1 = std::move(blocks.k1);
  plan.valid_k_max = plan.k1.empty() ? 0 : plan.k1.back();
  return plan;
}

SlowPoint assemble_slow_point(const SpectralModel& model, const SlowPointPlan& plan) {
  if (plan.bins.size() != plan.t.size()) {
    throw std::invalid_argument("assemble_slow_point: one bin per block required");
  }
  SlowPoint point;
  point.vector = Vector::Zero(model.eigenbasis.rows());
  double norm_sq = 0.0;
  for (std::size_t n = 0; n < plan.bins.size(); ++n) {
    if (plan.bins[n] >= model.atoms()) {
      throw std::out_of_range("assemble_slow_point: bin beyond the model's atoms");
    }
    const double c = 1.0 / static_cast<double>(plan.t[n]);
    point.coefficients.push_back(c);
    point.vector += c * model.eigenbasis.col(static_cast<Index>(plan.bins[n]));
    norm_sq += c * c;
  }
  point.norm = std::sqrt(norm_sq);
  return point;
}

double BoundReport::min_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) m = std::min(m, r.margin);
  return m;
}

BoundReport verify_lower_bounds(const SpectralModel& model, const Subspace& a, const Subspace& b,
                                const SlowPoint& x, const SlowPointPlan& plan,
                                const LambdaSchedule& lambda, std::size_t K, double slack) {
  require_same_dim(a.ambient_dim(), b.ambient_dim(), "verify_lower_bounds");
  require_same_dim(x.vector.size(), a.ambient_dim(), "verify_lower_bounds");
  if (K > plan.valid_k_max || K > lambda.size()) {
    throw std::invalid_argument("verify_lower_bounds: K = " + std::to_string(K) +
                                " exceeds the certified range " + std::to_string(plan.valid_k_max));
  }
  BoundReport report;
  Vector y = x.vector;
  for (std::size_t k = 1; k <= K; ++k) {
    y = project(b, project(a, y));
    const std::size_t n = plan.block_of_step(k);
    BoundRow row;
    row.k = k;
    row.n = n + 1;
    row.lambda_k = lambda.at(k);
    const double tn = static_cast<double>(plan.t[n]);
    row.t_bound = std::pow(plan.alpha[n], 2.0 * static_cast<double>(k)) / tn;
    row.t_norm = project(a, y).norm();
    double spectral_sq = 0.0;
    for (std::size_t m = 0; m < plan.bins.size(); ++m) {
      const double p = power_norm_of_atom(model, plan.bins[m], static_cast<int>(k));
      const double c = x.coefficients[m];
      spectral_sq += p * p * c * c;
    }
    row.spectral_norm = std::sqrt(spectral_sq);
    row.pba_norm = y.norm();
    row.margin = row.pba_norm - row.lambda_k;
    row.pass = row.t_norm >= row.t_bound - slack && row.pba_norm >= row.lambda_k - slack &&
               row.pba_norm >= row.t_norm - slack;
    if (!row.pass && !report.first_failure) report.first_failure = k;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace altproj
