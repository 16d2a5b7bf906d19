#include "altproj/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "altproj/dynamics.hpp"
#include "altproj/experiment.hpp"
#include "altproj/models.hpp"
#include "altproj/rng.hpp"
#include "altproj/serialize.hpp"

namespace altproj::cli {

namespace {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AssertionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in '" + path + "': " + e.what());
  }
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << contents;
  if (!out) throw ConfigError("write failed for '" + path + "'");
}

void require_positive_tol(double tol) {
  if (!(tol > 0.0)) throw ConfigError("tolerances must be positive");
}

template <typename T>
T param_or(const json& params, const char* key, T fallback) {
  return params.contains(key) ? params.at(key).get<T>() : fallback;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw ConfigError("not a number: '" + item + "'");
    values.push_back(v);
  }
  return values;
}

struct SigmaSpec {
  SigmaFamily family = SigmaFamily::PowerGap;
  std::size_t N = 16;
  SigmaParams params;
};

SigmaSpec parse_sigma_spec(const json& params) {
  SigmaSpec spec;
  spec.family = parse_sigma_family(params.at("schedule").get<std::string>());
  spec.N = param_or<std::size_t>(params, "N", spec.N);
  spec.params.q = param_or(params, "q", spec.params.q);
  spec.params.p = param_or(params, "p", spec.params.p);
  spec.params.bound = param_or(params, "bound", spec.params.bound);
  return spec;
}

struct LoadedModel {
  Subspace s1;
  Subspace s2;
  std::optional<BlockAngleModel> block;
  std::optional<SigmaSpec> sigma;
};

LoadedModel load_model(const json& cfg, std::uint64_t seed) {
  if (!cfg.is_object() || !cfg.contains("family")) {
    throw ConfigError("model config needs a \"family\" field");
  }
  const auto family = cfg.at("family").get<std::string>();
  const json params = cfg.value("params", json::object());
  if (family == "block") {
    std::optional<SigmaSpec> sigma;
    if (!params.contains("sigmas")) sigma = parse_sigma_spec(params);
    BlockAngleModel model =
        sigma ? block_model(sigma_schedules(sigma->family, sigma->N, sigma->params))
              : two_line_blocks(params.at("sigmas").get<std::vector<double>>());
    Subspace a = model.a;
    Subspace b = model.b;
    return {std::move(a), std::move(b), std::move(model), sigma};
  }
  if (family == "counterexample") {
    CounterexampleInstance inst = counterexample(param_or<Index>(params, "N", 60));
    return {std::move(inst.c1), std::move(inst.c2), std::nullopt, std::nullopt};
  }
  if (family == "random") {
    auto [s1, s2] = random_pair(params.at("d").get<Index>(), params.at("r1").get<Index>(),
                                params.at("r2").get<Index>(), param_or<Index>(params, "overlap", 0),
                                param_or<std::uint64_t>(params, "seed", seed));
    return {std::move(s1), std::move(s2), std::nullopt, std::nullopt};
  }
  if (family == "explicit") {
    Subspace s1 = subspace_from_json(params.at("S1"));
    Subspace s2 = subspace_from_json(params.at("S2"));
    require_same_dim(s1.ambient_dim(), s2.ambient_dim(), "explicit model");
    return {std::move(s1), std::move(s2), std::nullopt, std::nullopt};
  }
  throw ConfigError("unknown model family '" + family + "'");
}

LambdaSchedule lambda_from_json(const json& cfg) {
  if (cfg.contains("values")) return validate_lambda(cfg.at("values").get<std::vector<double>>());
  return generate_lambda(parse_lambda_generator(cfg.at("generator").get<std::string>()),
                         cfg.at("K").get<std::size_t>(), param_or(cfg, "param", 0.0));
}

// ---------------------------------------------------------------------------

struct CommonOptions {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  double tol = kIntersectionTol;
};

int cmd_angle(const CommonOptions& opts, std::ostream& out) {
  require_positive_tol(opts.tol);
  const LoadedModel model = load_model(read_json_file(opts.config), opts.seed);
  const AngleReport report = angle_report(model.s1, model.s2, opts.tol);
  const std::string text = to_json(report).dump(2) + "\n";
  if (!opts.out.empty()) write_file(opts.out, text);
  out << text;
  return kOk;
}

struct IterateOptions {
  int steps = 0;
  int window = 10;
  std::string start;
};

int cmd_iterate(const CommonOptions& opts, const IterateOptions& it, std::ostream& out,
                std::ostream& err) {
  require_positive_tol(opts.tol);
  if (it.steps < 1) throw ConfigError("--steps must be >= 1");
  const json cfg = read_json_file(opts.config);
  const LoadedModel model = load_model(cfg, opts.seed);
  const Index d = model.s1.ambient_dim();

  Vector x;
  if (!it.start.empty() || cfg.contains("start")) {
    const std::vector<double> raw =
        !it.start.empty() ? parse_list(it.start) : cfg.at("start").get<std::vector<double>>();
    if (static_cast<Index>(raw.size()) != d) {
      throw ConfigError("start vector has " + std::to_string(raw.size()) + " entries, expected " +
                        std::to_string(d));
    }
    x = Eigen::Map<const Vector>(raw.data(), d);
  } else {
    x = Rng(opts.seed).normal_vector(d);
  }

  const IterationTrace trace = alternate(model.s1, model.s2, x, it.steps, opts.tol);
  std::ostringstream csv;
  write_trace_csv(csv, trace);

  std::ostringstream summary;
  summary << "cosine " << format_double(trace.cosine) << " c2 "
          << format_double(trace.cosine * trace.cosine);
  if (trace.size() >= static_cast<std::size_t>(it.window) + 1 || trace.errors.back() == 0.0) {
    const RateEstimate rate = rate_fit(trace, it.window);
    summary << " fitted_rate " << format_double(rate.rate) << (rate.hit_zero ? " (hit zero)" : "");
  } else {
    summary << " fitted_rate n/a (fewer than window + 1 steps)";
  }
  summary << '\n';

  if (opts.out.empty()) {
    out << csv.str();
    err << summary.str();
  } else {
    write_file(opts.out, csv.str());
    out << summary.str();
  }

  const double slack = 1e-9 * trace.start_norm;
  if (trace.worst_increase() > slack || trace.worst_bound_excess() > slack) {
    throw AssertionFailure("trace violates monotonicity or the c^(2k-1)|x| bound");
  }
  return kOk;
}

struct SlowpointOptions {
  std::string lambda = "reciprocal-sqrt";
  double lambda_param = 0.0;
  std::string lambda_values;
  std::size_t K = 50;
  std::string sigma_family = "power-gap";
  double sigma_param = std::nan("");
  std::size_t start_blocks = 16;
  std::size_t cap = 10000;
  std::string plan_out;
};

SlowPointRequest slowpoint_request(const json& cfg, const SlowpointOptions& sp, const CLI::App& app) {
  auto given = [&app](const char* name) { return app.count(name) > 0; };

  json lambda_cfg = cfg.value("lambda", json::object());
  if (given("--lambda")) lambda_cfg["generator"] = sp.lambda;
  if (given("--lambda-param")) lambda_cfg["param"] = sp.lambda_param;
  if (given("--K")) lambda_cfg["K"] = sp.K;
  if (given("--lambda-values")) lambda_cfg = {{"values", parse_list(sp.lambda_values)}};
  if (!lambda_cfg.contains("values")) {
    if (!lambda_cfg.contains("generator")) lambda_cfg["generator"] = sp.lambda;
    if (!lambda_cfg.contains("K")) lambda_cfg["K"] = sp.K;
  }

  json sigma_cfg = cfg.value("sigma", json::object());
  if (given("--sigma-family") || !sigma_cfg.contains("schedule")) sigma_cfg["schedule"] = sp.sigma_family;
  SigmaSpec spec = parse_sigma_spec(sigma_cfg);
  if (given("--sigma-param")) {
    switch (spec.family) {
      case SigmaFamily::GeometricGap: spec.params.q = sp.sigma_param; break;
      case SigmaFamily::PowerGap: spec.params.p = sp.sigma_param; break;
      case SigmaFamily::Capped: spec.params.bound = sp.sigma_param; break;
      case SigmaFamily::HarmonicGap: break;
    }
  }

  SlowPointRequest request{lambda_from_json(lambda_cfg), spec.family, spec.params};
  request.start_blocks = given("--start-blocks") ? sp.start_blocks
                                                 : param_or<std::size_t>(cfg, "start_blocks", sp.start_blocks);
  request.cap_atoms = given("--cap") ? sp.cap : param_or<std::size_t>(cfg, "cap", sp.cap);
  if (request.start_blocks < 1 || request.cap_atoms < 1) {
    throw ConfigError("start blocks and cap must be >= 1");
  }
  return request;
}

int cmd_slowpoint(const CommonOptions& opts, const SlowpointOptions& sp, const CLI::App& app,
                  std::ostream& out, std::ostream& err) {
  require_positive_tol(opts.tol);
  const json cfg = opts.config.empty() ? json::object() : read_json_file(opts.config);
  const SlowPointRequest request = slowpoint_request(cfg, sp, app);
  const double slack = app.count("--tol") ? opts.tol : 1e-10;
  const SlowPointRun run = run_slow_point(request, slack);

  std::ostringstream csv;
  write_verification_csv(csv, run.bounds);
  const std::string plan_text = to_json(run.plan).dump(2) + "\n";
  if (!sp.plan_out.empty()) write_file(sp.plan_out, plan_text);

  std::ostringstream summary;
  summary << "blocks " << run.model.sigmas.size() << " bins " << run.plan.bins.size()
          << " valid_k_max " << run.plan.valid_k_max << " min_margin "
          << format_double(run.bounds.min_margin()) << " status " << (run.ok() ? "ok" : "FAILED")
          << '\n';
  if (opts.out.empty()) {
    out << csv.str();
    err << summary.str();
  } else {
    write_file(opts.out, csv.str());
    out << summary.str();
  }
  if (!run.bounds.ok()) {
    throw AssertionFailure("lower bound violated at k = " + std::to_string(*run.bounds.first_failure));
  }
  if (run.first_map_failure) {
    throw AssertionFailure("alternating-projection error below lambda_k at k = " +
                           std::to_string(*run.first_map_failure));
  }
  return kOk;
}

int cmd_counterexample(const CommonOptions& opts, Index N_flag, bool N_given, std::ostream& out) {
  Index N = N_flag;
  if (!N_given && !opts.config.empty()) N = param_or<Index>(read_json_file(opts.config), "N", N_flag);
  if (N < 8) throw ConfigError("counterexample needs N >= 8");
  const CounterexampleInstance inst = counterexample(N);
  const RefutationReport ref = refute_decomposition(inst);
  const PerpCheckReport perp = perp_basis_check(inst);

  json inner = json::array();
  double worst_inner = 0.0;
  for (std::size_t n = 0; n < inst.e_prime.size(); ++n) {
    const double v = inst.e_prime[n].dot(inst.f_prime[n]);
    const double nn = static_cast<double>(n + 1);
    worst_inner = std::max(worst_inner, std::abs(v - 1.0 / (1.0 + 1.0 / (4.0 * nn * nn))));
    inner.push_back(v);
  }
  const bool inner_ok = worst_inner <= 1e-12;
  const bool trivial_intersection = ref.intersection_rank == 0;

  json report = {
      {"N", N},
      {"inner_e1_f1", inner.at(0)},
      {"inner_en_fn", inner},
      {"rho1", inst.rho.at(0)},
      {"x_dot_f1", ref.x_dot_f1},
      {"norm_PEx", ref.norm_pe_x},
      {"x_distance_to_C1", ref.x_distance_to_c1},
      {"intersection_rank", ref.intersection_rank},
      {"decomposition_residual", ref.decomposition_residual},
      {"perp_generators", perp.generators},
      {"perp_max_inner_with_EF", perp.max_inner_with_ef},
      {"perp_max_family_coupling", perp.max_family_coupling},
      {"checks",
       {{"inner_products", inner_ok},
        {"trivial_intersection", trivial_intersection},
        {"x_in_C1", ref.x_in_c1},
        {"PEx_zero", ref.pe_x_zero},
        {"x_not_in_F_perp", ref.x_not_in_f_perp},
        {"decomposition_fails", ref.decomposition_fails},
        {"perp_family", perp.all_pass()}}},
  };
  const bool all = inner_ok && trivial_intersection && ref.all_pass() && perp.all_pass();
  report["all_pass"] = all;
  const std::string text = report.dump(2) + "\n";
  if (!opts.out.empty()) write_file(opts.out, text);
  out << text;
  if (!all) throw AssertionFailure("counterexample checks failed");
  return kOk;
}

int cmd_dichotomy(const CommonOptions& opts, std::ostream& out) {
  require_positive_tol(opts.tol);
  const json cfg = read_json_file(opts.config);
  const int steps = param_or(cfg, "steps", 200);
  const int window = param_or(cfg, "window", 10);
  if (steps < window + 1 || window < 1) throw ConfigError("need steps >= window + 1 >= 2");

  const LoadedModel capped = load_model(cfg.at("capped"), opts.seed);
  const LoadedModel uncapped = load_model(cfg.at("uncapped"), opts.seed);
  if (!capped.block || !uncapped.block) throw ConfigError("dichotomy needs two block models");
  if (!uncapped.sigma) throw ConfigError("uncapped model must name a sigma schedule");

  std::ostringstream table;
  table << "branch,schedule,closed_sum,cosine,c2,result,status\n";
  auto label = [](const LoadedModel& m) {
    const std::string closed = !m.block->closed_sum ? "unknown" : (*m.block->closed_sum ? "true" : "false");
    const std::string name = m.sigma ? sigma_family_name(m.sigma->family) : "explicit";
    return name + "," + closed;
  };

  // Linear branch: equal weight on every block's A-axis.
  const BlockAngleModel& cm = *capped.block;
  const Vector x = cm.a.basis().rowwise().sum() / std::sqrt(static_cast<double>(cm.sigmas.size()));
  const IterationTrace trace = alternate(cm.a, cm.b, x, steps, opts.tol);
  const RateEstimate rate = rate_fit(trace, window);
  const double c2 = trace.cosine * trace.cosine;
  const bool linear_ok = rate.hit_zero || rate.rate <= c2 + 0.01;
  table << "capped," << label(capped) << ',' << format_double(trace.cosine) << ','
        << format_double(c2) << ",fitted_rate=" << format_double(rate.rate) << ','
        << (linear_ok ? "ok" : "FAILED") << '\n';

  // Slow branch: construct x_lambda on the uncapped schedule.
  SlowPointRequest request{lambda_from_json(cfg.at("lambda")), uncapped.sigma->family,
                           uncapped.sigma->params};
  request.start_blocks = uncapped.sigma->N;
  request.cap_atoms = param_or<std::size_t>(cfg, "cap", request.cap_atoms);
  const double uc = std::sqrt(uncapped.block->sigmas.back());
  int code = kOk;
  try {
    const SlowPointRun run = run_slow_point(request);
    table << "uncapped," << label(uncapped) << ',' << format_double(uc) << ','
          << format_double(uc * uc) << ",valid_k_max=" << run.plan.valid_k_max
          << " blocks=" << run.model.sigmas.size() << " min_margin="
          << format_double(run.bounds.min_margin()) << ',' << (run.ok() ? "ok" : "FAILED") << '\n';
    if (!run.ok()) code = kAssertionFailure;
  } catch (const InfeasibleConstruction& e) {
    table << "uncapped," << label(uncapped) << ',' << format_double(uc) << ','
          << format_double(uc * uc) << ",needs eigenvalue >= " << format_double(e.level())
          << " at n=" << e.n() << ",infeasible\n";
    code = kInfeasible;
  }
  if (!linear_ok) code = kAssertionFailure;

  if (!opts.out.empty()) write_file(opts.out, table.str());
  out << table.str();
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Alternating projections: Friedrichs angles, rates and slowly converging points"};
  app.require_subcommand(1);

  CommonOptions opts;
  auto add_common = [&opts](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", opts.config, "JSON config file");
    if (config_required) c->required();
    sub->add_option("--out", opts.out, "output path");
    sub->add_option("--seed", opts.seed, "random seed");
    sub->add_option("--tol", opts.tol, "tolerance");
  };

  auto* angle = app.add_subcommand("angle", "Friedrichs and principal cosines of a model pair");
  add_common(angle, true);

  IterateOptions it;
  auto* iterate = app.add_subcommand("iterate", "run alternating projections, write k,error,kw_bound");
  add_common(iterate, true);
  iterate->add_option("--steps", it.steps, "number of sweeps")->required();
  iterate->add_option("--window", it.window, "tail window for the rate fit");
  iterate->add_option("--start", it.start, "comma separated start vector");

  SlowpointOptions sp;
  auto* slowpoint = app.add_subcommand("slowpoint", "construct and verify a slowly converging point");
  add_common(slowpoint, false);
  slowpoint->add_option("--lambda", sp.lambda,
                        "lambda generator: reciprocal, reciprocal-sqrt, power, geometric");
  slowpoint->add_option("--lambda-param", sp.lambda_param, "exponent or ratio for the generator");
  slowpoint->add_option("--lambda-values", sp.lambda_values, "explicit comma separated schedule");
  slowpoint->add_option("--K", sp.K, "schedule length");
  slowpoint->add_option("--sigma-family", sp.sigma_family,
                        "block schedule: power-gap, geometric-gap, harmonic-gap, capped");
  slowpoint->add_option("--sigma-param", sp.sigma_param, "p, q or bound of the block schedule");
  slowpoint->add_option("--start-blocks", sp.start_blocks, "initial number of blocks");
  slowpoint->add_option("--cap", sp.cap, "maximum number of atoms");
  slowpoint->add_option("--plan-out", sp.plan_out, "write the plan JSON here");

  Index N = 60;
  auto* cex = app.add_subcommand("counterexample", "check the two-subspace decomposition counterexample");
  add_common(cex, false);
  cex->add_option("--N", N, "truncation dimension");

  auto* dichotomy = app.add_subcommand("dichotomy", "contrast a capped and an uncapped block schedule");
  add_common(dichotomy, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (*angle) return cmd_angle(opts, out);
    if (*iterate) return cmd_iterate(opts, it, out, err);
    if (*slowpoint) return cmd_slowpoint(opts, sp, *slowpoint, out, err);
    if (*cex) return cmd_counterexample(opts, N, cex->count("--N") > 0, out);
    if (*dichotomy) return cmd_dichotomy(opts, out);
  } catch (const InfeasibleConstruction& e) {
    err << "infeasible: " << e.what() << " (required spectral level " << format_double(e.level())
        << ")\n";
    return kInfeasible;
  } catch (const AssertionFailure& e) {
    err << "assertion failed: " << e.what() << '\n';
    return kAssertionFailure;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInternalError;
  }
  return kConfigError;
}

}  // namespace altproj::cli
