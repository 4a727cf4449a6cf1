#include "setgrad/config.hpp"

#include <cmath>

#include "setgrad/errors.hpp"

namespace setgrad {

namespace {

template <class T>
void read_if(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig experiment_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidInputError("config must be a JSON object");
  ExperimentConfig c;
  read_if(j, "mode", c.mode);
  read_if(j, "fn", c.fn);
  if (j.contains("fn_params")) c.fn_params = j.at("fn_params");
  read_if(j, "x0", c.x0);
  read_if(j, "eps0", c.eps0);
  read_if(j, "shrink", c.shrink);
  read_if(j, "sigma", c.sigma);
  read_if(j, "eps_min", c.eps_min);
  read_if(j, "samples", c.samples);
  read_if(j, "armijo_c", c.armijo_c);
  read_if(j, "max_iter", c.max_iter);
  read_if(j, "seed", c.seed);
  read_if(j, "norm", c.norm);
  read_if(j, "sampled", c.sampled);
  read_if(j, "workers", c.workers);
  read_if(j, "naive_step", c.naive_step);
  read_if(j, "naive_iters", c.naive_iters);
  read_if(j, "out_trace", c.out_trace);
  read_if(j, "out_summary", c.out_summary);
  return c;
}

nlohmann::json experiment_to_json(const ExperimentConfig& c) {
  return {{"mode", c.mode},
          {"fn", c.fn},
          {"fn_params", c.fn_params},
          {"x0", c.x0},
          {"eps0", c.eps0},
          {"shrink", c.shrink},
          {"sigma", c.sigma},
          {"eps_min", c.eps_min},
          {"samples", c.samples},
          {"armijo_c", c.armijo_c},
          {"max_iter", c.max_iter},
          {"seed", c.seed},
          {"norm", c.norm},
          {"sampled", c.sampled},
          {"workers", c.workers},
          {"naive_step", c.naive_step},
          {"naive_iters", c.naive_iters},
          {"out_trace", c.out_trace},
          {"out_summary", c.out_summary}};
}

std::vector<ConfigViolation> validate_experiment(const ExperimentConfig& c) {
  std::vector<ConfigViolation> out;
  auto bad = [&](const char* field, const std::string& msg) {
    out.push_back({field, msg});
  };

  if (c.mode != "descent" && c.mode != "naive")
    bad("mode", "expected \"descent\" or \"naive\"");

  bool fn_known = true;
  try {
    build_experiment_oracle(c);
  } catch (const Error& e) {
    fn_known = false;
    bad("fn", e.what());
  }

  if (c.x0.empty())
    bad("x0", "start point is required");
  else if (!all_finite(c.x0))
    bad("x0", "entries must be finite");
  else if (fn_known) {
    try {
      if (build_experiment_oracle(c).dim != c.x0.size())
        bad("x0", "dimension does not match the function");
    } catch (const Error&) {
    }
  }

  if (!(c.eps0 > 0.0) || !std::isfinite(c.eps0)) bad("eps0", "must be positive");
  if (!(c.shrink > 0.0) || !(c.shrink < 1.0)) bad("shrink", "must lie in (0,1)");
  if (!(c.sigma >= 0.0) || !std::isfinite(c.sigma))
    bad("sigma", "must be >= 0 (0 derives it from the Lipschitz bound)");
  if (!(c.eps_min > 0.0) || !std::isfinite(c.eps_min)) bad("eps_min", "must be positive");
  if (c.samples < 1) bad("samples", "must be >= 1");
  if (!(c.armijo_c > 0.0) || !(c.armijo_c <= 1.0)) bad("armijo_c", "must lie in (0,1]");
  if (c.max_iter < 1) bad("max_iter", "must be >= 1");
  if (c.workers < 1) bad("workers", "must be >= 1");
  if (!(c.naive_step > 0.0) || !std::isfinite(c.naive_step))
    bad("naive_step", "must be positive");
  if (c.naive_iters < 1) bad("naive_iters", "must be >= 1");
  try {
    NormSpec::parse(c.norm);
  } catch (const Error& e) {
    bad("norm", e.what());
  }
  return out;
}

FunctionOracle build_experiment_oracle(const ExperimentConfig& c) {
  return make_builtin(c.fn, c.fn_params);
}

DescentConfig build_descent_config(const ExperimentConfig& c,
                                   const FunctionOracle& oracle) {
  DescentConfig d;
  d.eps0 = c.eps0;
  d.shrink = c.shrink;
  d.eps_min = c.eps_min;
  d.samples = c.samples;
  d.armijo_c = c.armijo_c;
  d.max_iter = c.max_iter;
  d.seed = c.seed;
  d.norm = NormSpec::parse(c.norm);
  d.prefer_exact = !c.sampled;
  d.workers = c.workers;
  d.sigma = c.sigma;
  if (d.sigma == 0.0) {
    double lip = oracle.lipschitz_bound ? oracle.lipschitz_bound(c.x0, c.eps0, d.norm)
                                        : 1.0;
    d.sigma = 1e-6 * std::max(lip, 1e-6);
  }
  return d;
}

}  // namespace setgrad
