#include <doctest.h>

#include <sstream>

#include "setgrad/config.hpp"
#include "setgrad/trace.hpp"

using namespace setgrad;

TEST_CASE("trace csv round trip is bit exact") {
  auto valley = make_valley(0.01);
  DescentConfig cfg;
  cfg.eps0 = 0.5;
  cfg.sigma = 1e-3;
  cfg.prefer_exact = false;
  cfg.samples = 32;
  cfg.seed = 5;
  Trajectory traj = run_descent(valley, Vec{0.02, 5.0}, cfg);

  std::stringstream ss;
  write_trace_csv(traj, ss);
  Trajectory back = read_trace_csv(ss);

  REQUIRE(back.records.size() == traj.records.size());
  CHECK(back.dim == traj.dim);
  CHECK(back.status == traj.status);
  CHECK(back.final_f == traj.final_f);
  for (std::size_t i = 0; i < traj.records.size(); ++i) {
    const auto& a = traj.records[i];
    const auto& b = back.records[i];
    CHECK(a.iter == b.iter);
    CHECK(a.x == b.x);
    CHECK(a.f == b.f);
    CHECK(a.eps == b.eps);
    CHECK(a.a_min_norm == b.a_min_norm);
    CHECK(a.direction.has_value() == b.direction.has_value());
    if (a.direction) CHECK(*a.direction == *b.direction);
    CHECK(a.step == b.step);
    CHECK(a.samples == b.samples);
    CHECK(a.status == b.status);
  }

  // serializing the parsed trajectory reproduces the bytes
  std::stringstream ss2;
  write_trace_csv(back, ss2);
  std::stringstream ss3;
  write_trace_csv(traj, ss3);
  CHECK(ss2.str() == ss3.str());
}

TEST_CASE("summary fields") {
  auto valley = make_valley(0.01);
  Trajectory traj = naive_subgradient_run(valley, Vec{0.02, 5.0}, 0.05, 50);
  auto summary = trajectory_summary(traj);
  CHECK(summary.at("status") == "iter_limit");
  CHECK(summary.at("iterations") == 50);
  CHECK(summary.at("sign_alternations").get<std::size_t>() >= 10);
  CHECK(summary.at("final_x").size() == 2);
  CHECK(summary.contains("final_f"));
}

TEST_CASE("experiment config json round trip") {
  ExperimentConfig cfg;
  cfg.fn = "weighted_abs";
  cfg.fn_params = {{"weights", {1.0, 2.0}}};
  cfg.x0 = {0.5, -0.5};
  cfg.sigma = 1e-4;
  cfg.norm = "linf";
  cfg.seed = 99;
  auto j = experiment_to_json(cfg);
  ExperimentConfig back = experiment_from_json(j);
  CHECK(back.fn == cfg.fn);
  CHECK(back.fn_params == cfg.fn_params);
  CHECK(back.x0 == cfg.x0);
  CHECK(back.sigma == cfg.sigma);
  CHECK(back.norm == cfg.norm);
  CHECK(back.seed == cfg.seed);
  CHECK(validate_experiment(back).empty());
}

TEST_CASE("validation reports every violated field") {
  ExperimentConfig cfg;
  cfg.fn = "nonexistent";
  cfg.x0 = {};
  cfg.eps0 = -1.0;
  cfg.shrink = 2.0;
  cfg.armijo_c = 0.0;
  cfg.norm = "l7";
  cfg.naive_step = 0.0;
  auto violations = validate_experiment(cfg);
  auto has = [&](const std::string& field) {
    for (const auto& v : violations)
      if (v.field == field) return true;
    return false;
  };
  CHECK(has("fn"));
  CHECK(has("x0"));
  CHECK(has("eps0"));
  CHECK(has("shrink"));
  CHECK(has("armijo_c"));
  CHECK(has("norm"));
  CHECK(has("naive_step"));
}

TEST_CASE("valid default-ish config passes and builds") {
  ExperimentConfig cfg;
  cfg.fn = "valley";
  cfg.fn_params = {{"alpha", 0.01}};
  cfg.x0 = {0.02, 5.0};
  CHECK(validate_experiment(cfg).empty());
  auto oracle = build_experiment_oracle(cfg);
  CHECK(oracle.dim == 2);
  DescentConfig d = build_descent_config(cfg, oracle);
  CHECK(d.sigma > 0.0);  // derived from the Lipschitz bound
  CHECK_NOTHROW(d.validate());
}
