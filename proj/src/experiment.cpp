#include "altproj/experiment.hpp"

namespace altproj {

SlowPointRun run_slow_point(const SlowPointRequest& request, double slack) {
  if (request.start_blocks < 1) throw std::invalid_argument("start_blocks must be >= 1");
  std::size_t blocks = std::min(request.start_blocks, request.cap_atoms);
  std::optional<SigmaSchedule> schedule;
  std::optional<SlowPointPlan> plan;
  std::size_t short_n = 0;
  double short_level = 1.0;
  while (true) {
    try {
      schedule = sigma_schedules(request.family, blocks, request.params);
      plan = make_plan(request.lambda, schedule->values);
      break;
    } catch (const SpectrumExhausted& e) {
      short_n = e.n();
      short_level = e.level();
      if (blocks >= request.cap_atoms) {
        throw InfeasibleConstruction("cap of " + std::to_string(request.cap_atoms) +
                                         " atoms reached; " + e.what(),
                                     e.n(), e.level(), blocks);
      }
    } catch (const std::invalid_argument& e) {
      // The family cannot produce this many distinct values below 1.
      throw InfeasibleConstruction(std::string(e.what()), short_n, short_level, blocks);
    }
    blocks = std::min(2 * blocks, request.cap_atoms);
  }

  BlockAngleModel model = block_model(*schedule);
  SlowPoint point = assemble_slow_point(model.spectral, *plan);
  const std::size_t K = plan->valid_k_max;
  BoundReport bounds =
      verify_lower_bounds(model.spectral, model.a, model.b, point, *plan, request.lambda, K, slack);
  IterationTrace trace = alternate(model.a, model.b, point.vector, static_cast<int>(K));

  std::optional<std::size_t> map_failure;
  for (std::size_t k = 1; k <= K; ++k) {
    if (trace.errors[k - 1] < request.lambda.at(k) - slack) {
      map_failure = k;
      break;
    }
  }
  return SlowPointRun{std::move(model), std::move(*plan), std::move(point), std::move(bounds),
                      std::move(trace), map_failure};
}

}  // namespace altproj
