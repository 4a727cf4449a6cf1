// setgrad command line: run descent experiments, compare against the naive
// subgradient baseline, solve standalone min-norm instances, check the
// minimax identity and export sampled gradient hulls.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "setgrad/config.hpp"
#include "setgrad/descent.hpp"
#include "setgrad/errors.hpp"
#include "setgrad/hull.hpp"
#include "setgrad/minnorm.hpp"
#include "setgrad/trace.hpp"

namespace {

using nlohmann::json;
using namespace setgrad;

constexpr int kExitOk = 0;
constexpr int kExitInvalidConfig = 2;
constexpr int kExitRuntimeFailure = 3;

struct ExperimentFlags {
  std::string config_path;
  std::string fn;
  double alpha = 0.01;
  std::vector<double> weights;
  std::string spec_file;
  std::vector<double> x0;
  double eps0 = 0.5;
  double shrink = 0.5;
  double sigma = 0.0;
  double eps_min = 1e-3;
  std::size_t samples = 256;
  double armijo_c = 0.5;
  std::size_t max_iter = 10000;
  std::uint64_t seed = 0;
  std::string norm = "euclidean";
  bool sampled = false;
  unsigned workers = 1;
  std::string mode = "descent";
  double naive_step = 0.05;
  std::size_t naive_iters = 50;
  std::string out_trace;
  std::string out_summary;

  CLI::Option* o_fn = nullptr;
  CLI::Option* o_alpha = nullptr;
  CLI::Option* o_weights = nullptr;
  CLI::Option* o_spec_file = nullptr;
  CLI::Option* o_x0 = nullptr;
  CLI::Option* o_eps0 = nullptr;
  CLI::Option* o_shrink = nullptr;
  CLI::Option* o_sigma = nullptr;
  CLI::Option* o_eps_min = nullptr;
  CLI::Option* o_samples = nullptr;
  CLI::Option* o_armijo = nullptr;
  CLI::Option* o_max_iter = nullptr;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_norm = nullptr;
  CLI::Option* o_sampled = nullptr;
  CLI::Option* o_workers = nullptr;
  CLI::Option* o_mode = nullptr;
  CLI::Option* o_step = nullptr;
  CLI::Option* o_iters = nullptr;
  CLI::Option* o_out = nullptr;
  CLI::Option* o_summary = nullptr;
};

void add_experiment_flags(CLI::App* cmd, ExperimentFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file; flags override its values");
  f.o_fn = cmd->add_option("--fn", f.fn, "function: abs1d, valley, skewed_abs, half_max, weighted_abs, max_affine");
  f.o_alpha = cmd->add_option("--alpha", f.alpha, "valley weight of |x2|");
  f.o_weights = cmd->add_option("--weights", f.weights, "weighted_abs weights")->delimiter(',');
  f.o_spec_file = cmd->add_option("--spec-file", f.spec_file, "max_affine spec JSON file");
  f.o_x0 = cmd->add_option("--x0", f.x0, "start point, comma separated")->delimiter(',');
  f.o_eps0 = cmd->add_option("--eps", f.eps0, "initial ball radius");
  f.o_shrink = cmd->add_option("--shrink", f.shrink, "ball shrink factor in (0,1)");
  f.o_sigma = cmd->add_option("--sigma", f.sigma, "stationarity threshold (0 = derive from Lipschitz bound)");
  f.o_eps_min = cmd->add_option("--eps-min", f.eps_min, "stop shrinking below this radius");
  f.o_samples = cmd->add_option("--samples", f.samples, "gradient samples per ball");
  f.o_armijo = cmd->add_option("--armijo-c", f.armijo_c, "sufficient-decrease constant in (0,1]");
  f.o_max_iter = cmd->add_option("--max-iter", f.max_iter, "iteration cap");
  f.o_seed = cmd->add_option("--seed", f.seed, "RNG seed (SETGRAD_SEED overrides)");
  f.o_norm = cmd->add_option("--norm", f.norm, "euclidean, l1, linf or p:<exponent>");
  f.o_sampled = cmd->add_flag("--sampled", f.sampled, "sample gradients even when an exact hull exists");
  f.o_workers = cmd->add_option("--workers", f.workers, "sampling worker threads");
  f.o_mode = cmd->add_option("--mode", f.mode, "descent | naive");
  f.o_step = cmd->add_option("--step", f.naive_step, "naive mode: fixed step length");
  f.o_iters = cmd->add_option("--iters", f.naive_iters, "naive mode: iteration count");
  f.o_out = cmd->add_option("--out", f.out_trace, "trace CSV path");
  f.o_summary = cmd->add_option("--summary", f.out_summary, "summary JSON path (also printed)");
}

int fail_invalid(const json& detail) {
  std::cerr << detail.dump(2) << "\n";
  return kExitInvalidConfig;
}

// Config file first, then every flag the user actually passed on top.
std::optional<ExperimentConfig> resolve_experiment(const ExperimentFlags& f, int& rc) {
  ExperimentConfig cfg;
  if (!f.config_path.empty()) {
    std::ifstream is(f.config_path);
    if (!is) {
      rc = fail_invalid({{"error", "invalid_config"},
                         {"violations", json::array({{{"field", "config"},
                                                      {"message", "cannot open " + f.config_path}}})}});
      return std::nullopt;
    }
    try {
      cfg = experiment_from_json(json::parse(is));
    } catch (const std::exception& e) {
      rc = fail_invalid({{"error", "invalid_config"},
                         {"violations", json::array({{{"field", "config"},
                                                      {"message", e.what()}}})}});
      return std::nullopt;
    }
  }
  if (f.o_fn->count()) cfg.fn = f.fn;
  if (f.o_x0->count()) cfg.x0 = f.x0;
  if (f.o_eps0->count()) cfg.eps0 = f.eps0;
  if (f.o_shrink->count()) cfg.shrink = f.shrink;
  if (f.o_sigma->count()) cfg.sigma = f.sigma;
  if (f.o_eps_min->count()) cfg.eps_min = f.eps_min;
  if (f.o_samples->count()) cfg.samples = f.samples;
  if (f.o_armijo->count()) cfg.armijo_c = f.armijo_c;
  if (f.o_max_iter->count()) cfg.max_iter = f.max_iter;
  if (f.o_seed->count()) cfg.seed = f.seed;
  if (f.o_norm->count()) cfg.norm = f.norm;
  if (f.o_sampled->count()) cfg.sampled = f.sampled;
  if (f.o_workers->count()) cfg.workers = f.workers;
  if (f.o_mode->count()) cfg.mode = f.mode;
  if (f.o_step->count()) cfg.naive_step = f.naive_step;
  if (f.o_iters->count()) cfg.naive_iters = f.naive_iters;
  if (f.o_out->count()) cfg.out_trace = f.out_trace;
  if (f.o_summary->count()) cfg.out_summary = f.out_summary;

  if (cfg.fn == "valley" && (f.o_alpha->count() || !cfg.fn_params.contains("alpha")))
    cfg.fn_params["alpha"] = f.alpha;
  if (cfg.fn == "weighted_abs" && f.o_weights->count())
    cfg.fn_params["weights"] = f.weights;
  if (cfg.fn == "max_affine" && f.o_spec_file->count()) {
    std::ifstream is(f.spec_file);
    if (!is) {
      rc = fail_invalid({{"error", "invalid_config"},
                         {"violations", json::array({{{"field", "spec_file"},
                                                      {"message", "cannot open " + f.spec_file}}})}});
      return std::nullopt;
    }
    try {
      cfg.fn_params = json::parse(is);
    } catch (const std::exception& e) {
      rc = fail_invalid({{"error", "invalid_config"},
                         {"violations", json::array({{{"field", "spec_file"},
                                                      {"message", e.what()}}})}});
      return std::nullopt;
    }
  }

  if (const char* env = std::getenv("SETGRAD_SEED"))
    cfg.seed = std::strtoull(env, nullptr, 10);

  auto violations = validate_experiment(cfg);
  if (!violations.empty()) {
    json arr = json::array();
    for (const auto& v : violations) arr.push_back({{"field", v.field}, {"message", v.message}});
    rc = fail_invalid({{"error", "invalid_config"}, {"violations", arr}});
    return std::nullopt;
  }
  rc = kExitOk;
  return cfg;
}

struct RunOutput {
  Trajectory trajectory;
  json summary;
};

// Streams the trace so a crash still leaves the rows written so far.
int execute_experiment(const ExperimentConfig& cfg, RunOutput* out) {
  FunctionOracle oracle = build_experiment_oracle(cfg);
  std::ofstream trace;
  bool tracing = !cfg.out_trace.empty();
  if (tracing) {
    trace.open(cfg.out_trace);
    if (!trace) {
      std::cerr << json({{"error", "io_failure"},
                         {"message", "cannot open " + cfg.out_trace}})
                       .dump(2)
                << "\n";
      return kExitRuntimeFailure;
    }
    write_trace_header(trace, oracle.dim);
  }
  RecordSink sink = nullptr;
  if (tracing)
    sink = [&](const TrajectoryRecord& rec) {
      write_trace_row(trace, rec, oracle.dim);
      trace.flush();
    };

  Trajectory traj;
  try {
    if (cfg.mode == "naive") {
      traj = naive_subgradient_run(oracle, cfg.x0, cfg.naive_step, cfg.naive_iters, sink);
    } else {
      DescentConfig dcfg = build_descent_config(cfg, oracle);
      traj = run_descent(oracle, cfg.x0, dcfg, sink);
    }
  } catch (const std::exception& e) {
    if (tracing) trace.flush();
    std::cerr << json({{"error", "runtime_failure"}, {"message", e.what()}}).dump(2)
              << "\n";
    return kExitRuntimeFailure;
  }

  json summary = trajectory_summary(traj);
  if (!cfg.out_summary.empty()) {
    std::ofstream os(cfg.out_summary);
    os << summary.dump(2) << "\n";
  }
  if (out) {
    out->trajectory = std::move(traj);
    out->summary = std::move(summary);
  }
  return kExitOk;
}

int cmd_run(const ExperimentFlags& flags) {
  int rc = kExitOk;
  auto cfg = resolve_experiment(flags, rc);
  if (!cfg) return rc;
  RunOutput out;
  rc = execute_experiment(*cfg, &out);
  if (rc != kExitOk) return rc;
  std::cout << out.summary.dump(2) << "\n";
  return kExitOk;
}

int cmd_compare(const ExperimentFlags& flags, const std::string& format,
                const std::string& out_path) {
  int rc = kExitOk;
  auto cfg = resolve_experiment(flags, rc);
  if (!cfg) return rc;

  ExperimentConfig descent_cfg = *cfg;
  descent_cfg.mode = "descent";
  descent_cfg.out_trace.clear();
  descent_cfg.out_summary.clear();
  ExperimentConfig naive_cfg = descent_cfg;
  naive_cfg.mode = "naive";

  RunOutput a, b;
  rc = execute_experiment(descent_cfg, &a);
  if (rc != kExitOk) return rc;
  rc = execute_experiment(naive_cfg, &b);
  if (rc != kExitOk) return rc;

  std::ostringstream report;
  auto row = [&](const char* name, const RunOutput& r) {
    report << "| " << name << " | " << r.summary["iterations"] << " | "
           << format_double(r.summary["final_f"].get<double>()) << " | "
           << r.summary["status"].get<std::string>() << " | "
           << r.summary["sign_alternations"] << " |\n";
  };
  if (format == "csv") {
    report.str("");
    report << "method,iterations,final_f,status,sign_alternations\n";
    auto csv_row = [&](const char* name, const RunOutput& r) {
      report << name << "," << r.summary["iterations"] << ","
             << format_double(r.summary["final_f"].get<double>()) << ","
             << r.summary["status"].get<std::string>() << ","
             << r.summary["sign_alternations"] << "\n";
    };
    csv_row("set_gradient_descent", a);
    csv_row("naive_subgradient", b);
  } else {
    report << "# " << cfg->fn << " from x0=(";
    for (std::size_t i = 0; i < cfg->x0.size(); ++i)
      report << (i ? "," : "") << format_double(cfg->x0[i]);
    report << ")\n\n";
    report << "| method | iterations | final f | status | sign alternations |\n";
    report << "|--------|-----------:|--------:|--------|------------------:|\n";
    row("set-gradient descent", a);
    row("naive subgradient", b);
  }

  if (!out_path.empty()) {
    std::ofstream os(out_path);
    os << report.str();
  }
  std::cout << report.str();
  return kExitOk;
}

int cmd_min_norm(const std::string& points_path, const std::string& norm_text,
                 double tol) {
  NormSpec spec = NormSpec::euclidean();
  try {
    spec = NormSpec::parse(norm_text);
  } catch (const Error& e) {
    return fail_invalid({{"error", "invalid_config"},
                         {"violations", json::array({{{"field", "norm"},
                                                      {"message", e.what()}}})}});
  }
  std::ifstream is(points_path);
  if (!is)
    return fail_invalid({{"error", "invalid_config"},
                         {"violations", json::array({{{"field", "points"},
                                                      {"message", "cannot open " + points_path}}})}});
  try {
    HullSet hull = load_hull_csv(is);
    MinNormResult r = spec.kind() == NormKind::euclidean
                          ? min_norm_point_euclidean(hull, tol)
                          : min_dual_norm_point(hull, spec, tol);
    std::cout << json({{"point", r.point},
                       {"norm_value", r.norm_value},
                       {"coefficients", r.coefficients},
                       {"tolerance_achieved", r.tolerance_achieved},
                       {"iterations", r.iterations},
                       {"norm", spec.to_string()}})
                     .dump(2)
              << "\n";
    return kExitOk;
  } catch (const ConvergenceFailure& e) {
    std::cerr << json({{"error", "convergence_failure"},
                       {"message", e.what()},
                       {"best_point", e.best.point},
                       {"best_norm_value", e.best.norm_value}})
                     .dump(2)
              << "\n";
    return kExitRuntimeFailure;
  } catch (const std::exception& e) {
    std::cerr << json({{"error", "runtime_failure"}, {"message", e.what()}}).dump(2)
              << "\n";
    return kExitRuntimeFailure;
  }
}

// Builds a hull from either a points file or a function on a ball.
std::optional<HullSet> hull_from_flags(const std::string& points_path,
                                       const ExperimentFlags& flags,
                                       const ExperimentConfig& cfg, int& rc) {
  try {
    if (!points_path.empty()) {
      std::ifstream is(points_path);
      if (!is) {
        rc = fail_invalid({{"error", "invalid_config"},
                           {"violations", json::array({{{"field", "points"},
                                                        {"message", "cannot open " + points_path}}})}});
        return std::nullopt;
      }
      rc = kExitOk;
      return load_hull_csv(is);
    }
    FunctionOracle oracle = build_experiment_oracle(cfg);
    NormSpec norm = NormSpec::parse(cfg.norm);
    Region ball = BallRegion{cfg.x0, cfg.eps0, norm};
    rc = kExitOk;
    if (!cfg.sampled && oracle.has_exact_subdiff())
      return HullSet::exact(oracle.exact_region_subdiff(ball));
    return sample_ball_gradients(oracle, ball, cfg.samples, cfg.seed, cfg.workers);
  } catch (const std::exception& e) {
    std::cerr << json({{"error", "runtime_failure"}, {"message", e.what()}}).dump(2)
              << "\n";
    rc = kExitRuntimeFailure;
    return std::nullopt;
  }
  (void)flags;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gradients of nonsmooth functions on sets: descent experiments, "
               "min-norm solves and duality checks"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "run one experiment, write trace + summary");
  ExperimentFlags run_flags;
  add_experiment_flags(run_cmd, run_flags);

  // compare
  auto* compare_cmd = app.add_subcommand("compare", "set-gradient descent vs naive subgradient");
  ExperimentFlags compare_flags;
  add_experiment_flags(compare_cmd, compare_flags);
  std::string compare_format = "md";
  std::string compare_out;
  compare_cmd->add_option("--format", compare_format, "md | csv");
  compare_cmd->add_option("--report", compare_out, "report output path");

  // min-norm
  auto* minnorm_cmd = app.add_subcommand("min-norm", "minimum-norm point of a point-set hull");
  std::string mn_points, mn_norm = "euclidean";
  double mn_tol = 1e-10;
  minnorm_cmd->add_option("--points", mn_points, "CSV, one point per row")->required();
  minnorm_cmd->add_option("--norm", mn_norm, "euclidean, l1, linf or p:<exponent>");
  minnorm_cmd->add_option("--tol", mn_tol, "optimality tolerance");

  // duality-check
  auto* duality_cmd = app.add_subcommand("duality-check",
                                         "compare inf of the support over the unit sphere "
                                         "with the negated min-norm value");
  ExperimentFlags duality_flags;
  add_experiment_flags(duality_cmd, duality_flags);
  std::string du_points;
  std::size_t du_sphere = 10000;
  duality_cmd->add_option("--points", du_points, "hull CSV instead of a function");
  duality_cmd->add_option("--sphere-samples", du_sphere, "unit directions to sample");

  // sample-grad
  auto* sample_cmd = app.add_subcommand("sample-grad", "sample a gradient hull on a ball");
  ExperimentFlags sample_flags;
  add_experiment_flags(sample_cmd, sample_flags);
  std::string sg_out, sg_format = "csv";
  sample_cmd->add_option("--hull-out", sg_out, "output path (default stdout)");
  sample_cmd->add_option("--format", sg_format, "csv | json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidConfig;
  }

  if (run_cmd->parsed()) return cmd_run(run_flags);
  if (compare_cmd->parsed()) return cmd_compare(compare_flags, compare_format, compare_out);
  if (minnorm_cmd->parsed()) return cmd_min_norm(mn_points, mn_norm, mn_tol);

  if (duality_cmd->parsed()) {
    int rc = kExitOk;
    std::optional<ExperimentConfig> cfg;
    if (du_points.empty()) {
      cfg = resolve_experiment(duality_flags, rc);
      if (!cfg) return rc;
    } else {
      cfg = ExperimentConfig{};  // norm/seed still honored below
      if (duality_flags.o_norm->count()) cfg->norm = duality_flags.norm;
      if (duality_flags.o_seed->count()) cfg->seed = duality_flags.seed;
    }
    auto hull = hull_from_flags(du_points, duality_flags, *cfg, rc);
    if (!hull) return rc;
    try {
      NormSpec spec = NormSpec::parse(cfg->norm);
      double gap = minmax_gap(*hull, spec, du_sphere, cfg->seed);
      MinNormResult mn = spec.kind() == NormKind::euclidean
                             ? min_norm_point_euclidean(*hull)
                             : min_dual_norm_point(*hull, spec);
      std::cout << json({{"gap", gap},
                         {"min_norm_value", mn.norm_value},
                         {"sphere_samples", du_sphere},
                         {"norm", spec.to_string()},
                         {"hull_points", hull->size()}})
                       .dump(2)
                << "\n";
      return kExitOk;
    } catch (const std::exception& e) {
      std::cerr << json({{"error", "runtime_failure"}, {"message", e.what()}}).dump(2)
                << "\n";
      return kExitRuntimeFailure;
    }
  }

  if (sample_cmd->parsed()) {
    int rc = kExitOk;
    auto cfg = resolve_experiment(sample_flags, rc);
    if (!cfg) return rc;
    cfg->sampled = true;
    auto hull = hull_from_flags("", sample_flags, *cfg, rc);
    if (!hull) return rc;
    std::ostringstream body;
    if (sg_format == "json")
      body << hull_to_json(*hull).dump(2) << "\n";
    else
      save_hull_csv(*hull, body);
    if (!sg_out.empty()) {
      std::ofstream os(sg_out);
      if (!os) {
        std::cerr << json({{"error", "io_failure"},
                           {"message", "cannot open " + sg_out}})
                         .dump(2)
                  << "\n";
        return kExitRuntimeFailure;
      }
      os << body.str();
    } else {
      std::cout << body.str();
    }
    return kExitOk;
  }

  return kExitOk;
}
