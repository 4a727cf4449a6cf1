#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "setgrad/norms.hpp"
#include "setgrad/region.hpp"
#include "setgrad/vec.hpp"

namespace setgrad {

/// f(x) = max_k <c_k, x> + b_k.
struct MaxAffinePiece {
  Vec c;
  double b = 0.0;
};

struct MaxAffineSpec {
  std::size_t dim = 0;
  std::vector<MaxAffinePiece> pieces;
};

/// Schema: {"dim": n, "pieces": [{"c": [...], "b": ...}, ...]}.
MaxAffineSpec max_affine_from_json(const nlohmann::json& j);
nlohmann::json max_affine_to_json(const MaxAffineSpec& spec);

/// An evaluable nonsmooth locally Lipschitz test function.
///
/// grad_ae returns one gradient valid wherever f is differentiable; on the
/// measure-zero kink set it returns the gradient of the first active piece
/// in a fixed order, so sampled runs are reproducible.
///
/// exact_region_subdiff, when present, returns a vertex list whose convex
/// hull equals the gradient of f on the region (piecewise-affine functions
/// only). lipschitz_bound reports a valid Lipschitz rank of f on a norm
/// ball, measured in the dual norm.
struct FunctionOracle {
  std::size_t dim = 0;
  std::string name;
  std::function<double(std::span<const double>)> eval;
  std::function<Vec(std::span<const double>)> grad_ae;
  std::function<std::vector<Vec>(const Region&)> exact_region_subdiff;
  std::function<double(std::span<const double>, double, const NormSpec&)> lipschitz_bound;

  bool has_exact_subdiff() const { return static_cast<bool>(exact_region_subdiff); }

  /// Convenience wrapper: vertices of the gradient of f on the closed ball
  /// B(x, eps) under the given norm. eps = 0 yields the vertices of the
  /// generalized gradient at x. Throws UnsupportedError when no exact
  /// oracle exists.
  std::vector<Vec> exact_ball_subdiff(std::span<const double> x, double eps,
                                      const NormSpec& norm) const;
};

// Built-in test functions. All carry exact region subdifferentials.
FunctionOracle make_abs1d();                      // f(x) = |x|
FunctionOracle make_valley(double alpha);         // f(x1,x2) = |x1| + alpha |x2|
FunctionOracle make_skewed_abs();                 // f(x1,x2) = x1 + |x2|
FunctionOracle make_half_max();                   // f(x,y) = (x + y + |x-y|)/2
FunctionOracle make_weighted_abs(Vec weights);    // f(x) = sum_i w_i |x_i|
FunctionOracle make_max_affine(MaxAffineSpec spec);

/// Factory by name: abs1d, valley (params.alpha), skewed_abs, half_max,
/// weighted_abs (params.weights), max_affine (params = MaxAffineSpec json).
FunctionOracle make_builtin(const std::string& name, const nlohmann::json& params);

}  // namespace setgrad
