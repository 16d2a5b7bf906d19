#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "altproj/dynamics.hpp"
#include "altproj/models.hpp"
#include "altproj/slowpoint.hpp"

namespace altproj {

/// The block model could not be grown far enough to host every bin.
class InfeasibleConstruction : public std::runtime_error {
 public:
  InfeasibleConstruction(const std::string& what, std::size_t n, double level, std::size_t atoms)
      : std::runtime_error(what), n_(n), level_(level), atoms_(atoms) {}
  std::size_t n() const { return n_; }
  /// Spectral level alpha_n^2 that no available eigenvalue reached.
  double level() const { return level_; }
  std::size_t atoms_tried() const { return atoms_; }

 private:
  std::size_t n_;
  double level_;
  std::size_t atoms_;
};

struct SlowPointRequest {
  LambdaSchedule lambda;
  SigmaFamily family = SigmaFamily::PowerGap;
  SigmaParams params;
  std::size_t start_blocks = 16;
  std::size_t cap_atoms = 10000;
};

struct SlowPointRun {
  BlockAngleModel model;
  SlowPointPlan plan;
  SlowPoint point;
  BoundReport bounds;
  /// Alternating projections between A and B from x, computed independently of
  /// the spectral data.
  IterationTrace map_trace;
  std::optional<std::size_t> first_map_failure;  // k with map error < lambda_k

  bool ok() const { return bounds.ok() && !first_map_failure; }
};

/// Doubles the block count from start_blocks until every bin finds an
/// eigenvalue (or cap_atoms is exceeded), then builds and checks x_lambda for
/// every certified step.
SlowPointRun run_slow_point(const SlowPointRequest& request, double slack = 1e-10);

}  // namespace altproj
