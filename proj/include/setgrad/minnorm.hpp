#pragma once

#include <cstdint>

#include "setgrad/errors.hpp"
#include "setgrad/hull.hpp"
#include "setgrad/norms.hpp"
#include "setgrad/vec.hpp"

namespace setgrad {

/// Minimum-norm element of conv(hull) with the simplex weights that
/// produce it. For the Euclidean solver, tolerance_achieved is the final
/// variational-inequality violation max(0, ||a||^2 - min_i <a, a_i>); for
/// the general solver it is the certified optimality gap.
struct MinNormResult {
  Vec point;
  Vec coefficients;  // lambda_i >= 0, sum = 1, point = sum lambda_i a_i
  double norm_value = 0.0;
  double tolerance_achieved = 0.0;
  std::size_t iterations = 0;
};

/// Thrown when a solver stalls; carries the best iterate so callers can
/// degrade gracefully (the descent loop treats it as an inconclusive
/// stationarity test and shrinks the ball).
struct ConvergenceFailure : Error {
  ConvergenceFailure(const std::string& what, MinNormResult best_iterate)
      : Error(what), best(std::move(best_iterate)) {}
  MinNormResult best;
};

/// Euclidean minimum-norm point of conv(hull) by Wolfe's method
/// (major/minor cycles over an affinely independent corral). Exact up to
/// floating error for finite hulls; the result satisfies
/// <a, a_i - a> >= -tol * max(1, max_i ||a_i||^2) for every hull point.
MinNormResult min_norm_point_euclidean(const HullSet& hull, double tol = 1e-10);

/// Minimum of ||sum lambda_i a_i|| in the dual norm of spec over the
/// simplex, by projected subgradient descent with Polyak steps and
/// best-iterate/average tracking. The certified gap comes from the norming
/// vectors u_k: min_i <a_i, u> lower-bounds the optimum for any u in the
/// spec unit ball (and 0 always does). Unique minimizer for strictly
/// convex specs; for l1/linf any optimal point is acceptable.
/// Euclidean-dual instances delegate to Wolfe.
MinNormResult min_dual_norm_point(const HullSet& hull, const NormSpec& spec,
                                  double tol = 1e-8,
                                  std::size_t max_iters = 100000);

/// Empirical check of the minimax identity
/// inf_{||h|| <= 1} support(hull, h) = -min norm over conv(hull):
/// returns |min(0, min over sampled unit h of support) + min-norm value|.
/// Dense sphere sampling limits this to dimension <= 3.
double minmax_gap(const HullSet& hull, const NormSpec& spec,
                  std::size_t sphere_samples, std::uint64_t seed);

}  // namespace setgrad
