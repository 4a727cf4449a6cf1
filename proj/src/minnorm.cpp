#include "setgrad/minnorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "setgrad/kernels.hpp"
#include "setgrad/rng.hpp"

namespace setgrad {

namespace {

// Solve the equality-constrained least-norm system for the affine
// minimizer of ||sum mu_i p_i||^2 with sum mu_i = 1:
//   [ G  1 ] [mu]   [0]
//   [ 1' 0 ] [nu] = [1]
// Dense Gaussian elimination with partial pivoting; corrals stay small
// (at most dim+1 points).
bool affine_minimizer(const HullSet& hull, const std::vector<std::size_t>& corral,
                      std::vector<double>& mu) {
  const std::size_t m = corral.size();
  const std::size_t N = m + 1;
  std::vector<double> M(N * N, 0.0), rhs(N, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    auto pi = hull.point(corral[i]);
    for (std::size_t j = i; j < m; ++j) {
      double g = dot(pi, hull.point(corral[j]));
      M[i * N + j] = g;
      M[j * N + i] = g;
    }
    M[i * N + m] = 1.0;
    M[m * N + i] = 1.0;
  }
  rhs[m] = 1.0;

  std::vector<std::size_t> perm(N);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t piv = col;
    double best = std::fabs(M[perm[col] * N + col]);
    for (std::size_t r = col + 1; r < N; ++r) {
      double v = std::fabs(M[perm[r] * N + col]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best < 1e-300) return false;
    std::swap(perm[col], perm[piv]);
    const double d = M[perm[col] * N + col];
    for (std::size_t r = col + 1; r < N; ++r) {
      double factor = M[perm[r] * N + col] / d;
      if (factor == 0.0) continue;
      for (std::size_t c = col; c < N; ++c) M[perm[r] * N + c] -= factor * M[perm[col] * N + c];
      rhs[perm[r]] -= factor * rhs[perm[col]];
    }
  }
  std::vector<double> sol(N);
  for (std::size_t col = N; col-- > 0;) {
    double v = rhs[perm[col]];
    for (std::size_t c = col + 1; c < N; ++c) v -= M[perm[col] * N + c] * sol[c];
    sol[col] = v / M[perm[col] * N + col];
  }
  mu.assign(sol.begin(), sol.begin() + m);
  for (double v : mu)
    if (!std::isfinite(v)) return false;
  return true;
}

Vec combine(const HullSet& hull, const Vec& lambda) {
  Vec x(hull.dim(), 0.0);
  for (std::size_t i = 0; i < hull.size(); ++i) {
    if (lambda[i] == 0.0) continue;
    auto p = hull.point(i);
    for (std::size_t d = 0; d < hull.dim(); ++d) x[d] += lambda[i] * p[d];
  }
  return x;
}

MinNormResult finalize_euclidean(const HullSet& hull, const Vec& lambda,
                                 std::size_t iterations) {
  MinNormResult r;
  r.coefficients = lambda;
  r.point = combine(hull, lambda);
  r.norm_value = norm2(r.point);
  double min_dot;
  kernels::active().argmin_dot(hull.soa(), hull.size(), hull.soa_stride(),
                               hull.dim(), r.point.data(), &min_dot);
  r.tolerance_achieved = std::max(0.0, dot(r.point, r.point) - min_dot);
  r.iterations = iterations;
  return r;
}

// Projection onto the probability simplex (sort-based).
void project_simplex(Vec& v) {
  const std::size_t n = v.size();
  Vec u = v;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0.0, tau = 0.0;
  std::size_t rho = 0;
  for (std::size_t i = 0; i < n; ++i) {
    cumsum += u[i];
    double t = (cumsum - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) {
      rho = i + 1;
      tau = t;
    }
  }
  if (rho == 0) tau = (cumsum - 1.0) / static_cast<double>(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = std::max(0.0, v[i] - tau);
    total += v[i];
  }
  if (total > 0.0)
    for (auto& vi : v) vi /= total;
  else
    std::fill(v.begin(), v.end(), 1.0 / static_cast<double>(n));
}

}  // namespace

MinNormResult min_norm_point_euclidean(const HullSet& hull, double tol) {
  if (!(tol > 0.0)) throw InvalidInputError("min_norm tolerance must be positive");
  const std::size_t n = hull.size();
  const std::size_t d = hull.dim();
  const auto& ops = kernels::active();

  double scale2 = 0.0;
  std::size_t start = 0;
  double start_norm2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double nrm2 = dot(hull.point(i), hull.point(i));
    scale2 = std::max(scale2, nrm2);
    if (nrm2 < start_norm2) {
      start_norm2 = nrm2;
      start = i;
    }
  }
  const double threshold = tol * std::max(1.0, scale2);

  std::vector<std::size_t> corral{start};
  Vec lam_corral{1.0};
  std::vector<char> in_corral(n, 0);
  in_corral[start] = 1;

  Vec x(hull.point(start).begin(), hull.point(start).end());

  Vec lambda_full(n, 0.0);
  auto to_full = [&]() {
    std::fill(lambda_full.begin(), lambda_full.end(), 0.0);
    for (std::size_t i = 0; i < corral.size(); ++i) lambda_full[corral[i]] = lam_corral[i];
    return lambda_full;
  };

  double best_resid = std::numeric_limits<double>::infinity();
  Vec best_lambda = to_full();

  const std::size_t major_limit = 16 * (n + d) + 64;
  std::vector<double> mu;
  for (std::size_t major = 0; major < major_limit; ++major) {
    double min_dot_val;
    std::size_t j = ops.argmin_dot(hull.soa(), n, hull.soa_stride(), d, x.data(),
                                   &min_dot_val);
    double resid = dot(x, x) - min_dot_val;
    to_full();
    if (resid < best_resid) {
      best_resid = resid;
      best_lambda = lambda_full;
    }
    if (resid <= threshold) return finalize_euclidean(hull, lambda_full, major);
    if (in_corral[j])
      throw ConvergenceFailure("Wolfe stalled: optimal vertex already in corral",
                               finalize_euclidean(hull, best_lambda, major));

    corral.push_back(j);
    lam_corral.push_back(0.0);
    in_corral[j] = 1;

    // minor cycles: move toward the affine minimizer, dropping points that
    // hit zero weight, until the minimizer lies inside the corral simplex
    for (std::size_t minor = 0; minor <= n + 1; ++minor) {
      if (!affine_minimizer(hull, corral, mu))
        throw ConvergenceFailure("Wolfe stalled: singular corral system",
                                 finalize_euclidean(hull, best_lambda, major));
      double mu_min = *std::min_element(mu.begin(), mu.end());
      if (mu_min > -1e-14) {
        lam_corral = Vec(mu.begin(), mu.end());
        for (auto& v : lam_corral) v = std::max(v, 0.0);
        // weights clamped to zero leave the corral, else a later major
        // cycle could reselect them and report a false stall
        for (std::size_t i = lam_corral.size(); i-- > 0;) {
          if (lam_corral[i] == 0.0 && lam_corral.size() > 1) {
            in_corral[corral[i]] = 0;
            corral.erase(corral.begin() + static_cast<std::ptrdiff_t>(i));
            lam_corral.erase(lam_corral.begin() + static_cast<std::ptrdiff_t>(i));
          }
        }
        break;
      }
      double theta = 1.0;
      for (std::size_t i = 0; i < mu.size(); ++i)
        if (mu[i] <= 0.0) theta = std::min(theta, lam_corral[i] / (lam_corral[i] - mu[i]));
      for (std::size_t i = 0; i < mu.size(); ++i)
        lam_corral[i] += theta * (mu[i] - lam_corral[i]);
      // drop everything at (numerical) zero, at least one index each pass
      double lam_max = *std::max_element(lam_corral.begin(), lam_corral.end());
      bool dropped = false;
      for (std::size_t i = lam_corral.size(); i-- > 0;) {
        if (lam_corral[i] <= 1e-14 * std::max(1.0, lam_max)) {
          in_corral[corral[i]] = 0;
          corral.erase(corral.begin() + static_cast<std::ptrdiff_t>(i));
          lam_corral.erase(lam_corral.begin() + static_cast<std::ptrdiff_t>(i));
          dropped = true;
        }
      }
      if (!dropped) {
        // theta rounded away from zero without clearing a weight
        std::size_t drop = 0;
        for (std::size_t i = 1; i < lam_corral.size(); ++i)
          if (lam_corral[i] < lam_corral[drop]) drop = i;
        in_corral[corral[drop]] = 0;
        corral.erase(corral.begin() + static_cast<std::ptrdiff_t>(drop));
        lam_corral.erase(lam_corral.begin() + static_cast<std::ptrdiff_t>(drop));
      }
    }
    // renormalize and rebuild the iterate from the corral weights
    double total = std::accumulate(lam_corral.begin(), lam_corral.end(), 0.0);
    for (auto& v : lam_corral) v /= total;
    x = combine(hull, to_full());
  }
  throw ConvergenceFailure("Wolfe exceeded its major-cycle limit",
                           finalize_euclidean(hull, best_lambda, major_limit));
}

MinNormResult min_dual_norm_point(const HullSet& hull, const NormSpec& spec,
                                  double tol, std::size_t max_iters) {
  if (!(tol > 0.0)) throw InvalidInputError("min_dual_norm tolerance must be positive");
  const NormSpec dual = spec.dual();
  if (dual.kind() == NormKind::euclidean ||
      (dual.kind() == NormKind::p_norm && dual.exponent() == 2.0)) {
    MinNormResult r = min_norm_point_euclidean(hull, std::min(tol, 1e-10) * 1e-2);
    // report a duality-style gap in the same currency as the general solver
    if (r.norm_value > 0.0) {
      Vec u = r.point;
      for (auto& v : u) v /= r.norm_value;
      double lb = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < hull.size(); ++i)
        lb = std::min(lb, dot(hull.point(i), u));
      r.tolerance_achieved = std::max(0.0, r.norm_value - std::max(lb, 0.0));
    }
    return r;
  }

  const std::size_t n = hull.size();
  Vec lam(n, 1.0 / static_cast<double>(n));
  Vec v = combine(hull, lam);
  double f = norm_value(v, dual);

  Vec best_lam = lam;
  double best_f = f;
  double lb_best = 0.0;  // the optimum is a norm, hence >= 0

  Vec avg(n, 0.0);
  Vec g(n);
  std::size_t it = 0;
  for (; it < max_iters; ++it) {
    if (best_f - lb_best <= tol) break;
    Vec u = norming_vector(v, spec);
    double lb = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = dot(hull.point(i), u);
      lb = std::min(lb, g[i]);
    }
    lb_best = std::max(lb_best, lb);
    if (best_f - lb_best <= tol) break;

    // Polyak step toward the certified lower bound
    double gnorm2 = dot(g, g);
    if (gnorm2 < 1e-300) break;
    double eta = (f - lb_best) / gnorm2;
    if (eta <= 0.0) eta = 1e-3 / std::sqrt(static_cast<double>(it + 1));
    for (std::size_t i = 0; i < n; ++i) lam[i] -= eta * g[i];
    project_simplex(lam);
    v = combine(hull, lam);
    f = norm_value(v, dual);
    if (f < best_f) {
      best_f = f;
      best_lam = lam;
    }
    for (std::size_t i = 0; i < n; ++i) avg[i] += lam[i];
    if ((it & 63) == 63) {
      Vec bar = avg;
      double total = std::accumulate(bar.begin(), bar.end(), 0.0);
      for (auto& b : bar) b /= total;
      double fbar = norm_value(combine(hull, bar), dual);
      if (fbar < best_f) {
        best_f = fbar;
        best_lam = bar;
      }
    }
  }

  MinNormResult r;
  r.coefficients = best_lam;
  r.point = combine(hull, best_lam);
  r.norm_value = norm_value(r.point, dual);
  r.tolerance_achieved = std::max(0.0, r.norm_value - lb_best);
  r.iterations = it;
  if (r.tolerance_achieved > tol)
    throw ConvergenceFailure("min_dual_norm_point: gap " +
                                 std::to_string(r.tolerance_achieved) +
                                 " above tolerance after " + std::to_string(it) +
                                 " iterations",
                             std::move(r));
  return r;
}

double minmax_gap(const HullSet& hull, const NormSpec& spec,
                  std::size_t sphere_samples, std::uint64_t seed) {
  if (hull.dim() > 3)
    throw InvalidInputError("minmax_gap: dense sphere sampling needs dim <= 3");
  if (sphere_samples < 1) throw InvalidInputError("minmax_gap: need >= 1 sample");
  Rng rng(mix_seed(seed, 0x5f));
  const std::size_t d = hull.dim();
  double inf_support = 0.0;  // h = 0 is in the unit ball
  Vec h(d);
  for (std::size_t s = 0; s < sphere_samples; ++s) {
    double nrm = 0.0;
    do {
      for (auto& hi : h) hi = rng.gaussian();
      nrm = norm_value(h, spec);
    } while (nrm == 0.0);
    for (auto& hi : h) hi /= nrm;
    inf_support = std::min(inf_support, support_value(hull, h));
  }
  double min_norm;
  try {
    min_norm = min_dual_norm_point(hull, spec, 1e-9, 200000).norm_value;
  } catch (const ConvergenceFailure& e) {
    min_norm = e.best.norm_value;
  }
  return std::fabs(inf_support + min_norm);
}

}  // namespace setgrad
