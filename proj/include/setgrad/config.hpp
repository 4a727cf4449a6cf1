#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "setgrad/descent.hpp"
#include "setgrad/oracles.hpp"

namespace setgrad {

/// One experiment: a function, a start point and the method parameters.
/// Serializable to/from JSON with keys matching the CLI flags one to one;
/// flags override file values. sigma = 0 means "derive from the local
/// Lipschitz bound" (1e-6 * L(x0, eps0)).
struct ExperimentConfig {
  std::string mode = "descent";  // descent | naive
  std::string fn = "valley";
  nlohmann::json fn_params = nlohmann::json::object();
  Vec x0;

  double eps0 = 0.5;
  double shrink = 0.5;
  double sigma = 0.0;
  double eps_min = 1e-3;
  std::size_t samples = 256;
  double armijo_c = 0.5;
  std::size_t max_iter = 10000;
  std::uint64_t seed = 0;
  std::string norm = "euclidean";
  bool sampled = false;  // force sampling even when an exact oracle exists
  unsigned workers = 1;

  double naive_step = 0.05;
  std::size_t naive_iters = 50;

  std::string out_trace;
  std::string out_summary;
};

ExperimentConfig experiment_from_json(const nlohmann::json& j);
nlohmann::json experiment_to_json(const ExperimentConfig& config);

struct ConfigViolation {
  std::string field;
  std::string message;
};

/// Every violated field, empty when the config is runnable.
std::vector<ConfigViolation> validate_experiment(const ExperimentConfig& config);

/// Requires a valid config. Throws InvalidInputError otherwise.
FunctionOracle build_experiment_oracle(const ExperimentConfig& config);

/// Resolved DescentConfig (sigma derived when 0).
DescentConfig build_descent_config(const ExperimentConfig& config,
                                   const FunctionOracle& oracle);

}  // namespace setgrad
