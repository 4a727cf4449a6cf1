#include "setgrad/descent.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "setgrad/rng.hpp"

namespace setgrad {

namespace {

double quiet_nan() { return std::numeric_limits<double>::quiet_NaN(); }

MinNormResult solve_min_norm(const HullSet& hull, const NormSpec& spec) {
  if (spec.kind() == NormKind::euclidean ||
      (spec.kind() == NormKind::p_norm && spec.exponent() == 2.0))
    return min_norm_point_euclidean(hull);
  return min_dual_norm_point(hull, spec);
}

}  // namespace

DescentCertificate descent_direction(const HullSet& hull, const NormSpec& spec,
                                     double sigma,
                                     std::optional<double> lipschitz) {
  if (!(sigma > 0.0)) throw InvalidInputError("sigma must be positive");
  MinNormResult mn = solve_min_norm(hull, spec);

  DescentCertificate cert;
  cert.a_min = mn.point;
  cert.a_min_norm = mn.norm_value;
  cert.norm = spec;
  cert.stability_radius =
      lipschitz && *lipschitz > 0.0 ? mn.norm_value / *lipschitz : quiet_nan();
  cert.directional_value = quiet_nan();
  cert.pairing_residual = quiet_nan();
  if (mn.norm_value <= sigma) return cert;  // approximately 0 in the hull

  Vec h;
  if (spec.strictly_convex()) {
    h = dual_map(cert.a_min, spec);
    for (auto& v : h) v = -v;
  } else {
    // score the negated face vertices (and their centroid, which shares the
    // pairing and unit norm) by support value; the smallest wins
    auto face = dual_face(cert.a_min, spec);
    Vec centroid(hull.dim(), 0.0);
    for (const auto& vert : face)
      for (std::size_t i = 0; i < centroid.size(); ++i)
        centroid[i] += vert[i] / static_cast<double>(face.size());
    face.push_back(std::move(centroid));
    double best = std::numeric_limits<double>::infinity();
    for (auto& vert : face) {
      Vec cand(vert.size());
      for (std::size_t i = 0; i < vert.size(); ++i) cand[i] = -vert[i];
      double s = support_value(hull, cand);
      if (s < best) {
        best = s;
        h = std::move(cand);
      }
    }
  }
  cert.directional_value = support_value(hull, h);
  cert.pairing_residual = std::fabs(dot(cert.a_min, h) + cert.a_min_norm);
  cert.direction = std::move(h);
  return cert;
}

bool stability_check(std::span<const double> h, const DescentCertificate& cert,
                     double lipschitz) {
  if (!cert.direction) throw InvalidInputError("certificate has no direction");
  if (!(lipschitz > 0.0)) throw InvalidInputError("Lipschitz bound must be positive");
  const Vec& ht = *cert.direction;
  Vec diff(ht.size());
  for (std::size_t i = 0; i < ht.size(); ++i) diff[i] = h[i] - ht[i];
  return norm_value(diff, cert.norm) < cert.a_min_norm / lipschitz;
}

ApproxQualityReport approx_direction_quality(const HullSet& hull,
                                             const NormSpec& spec, double tau,
                                             double delta, std::size_t trials,
                                             std::uint64_t seed) {
  if (!spec.strictly_convex())
    throw InvalidInputError("approx_direction_quality needs a strictly convex norm");
  if (!(tau > 0.0) || !(delta > 0.0) || !(delta < 1.0))
    throw InvalidInputError("need tau > 0 and 0 < delta < 1");
  MinNormResult mn = solve_min_norm(hull, spec);
  ApproxQualityReport report;
  report.trials_requested = trials;
  report.tau = tau;
  report.delta = delta;
  report.min_support = std::numeric_limits<double>::infinity();
  report.max_support = -std::numeric_limits<double>::infinity();
  if (mn.norm_value == 0.0) return report;  // 0 in the hull, nothing to perturb

  Rng rng(mix_seed(seed, 0xad));
  Vec cand(hull.dim()), h(hull.dim());
  for (std::size_t trial = 0; trial < trials; ++trial) {
    bool found = false;
    for (int attempt = 0; attempt < 64 && !found; ++attempt) {
      std::size_t pick = rng.next_u64() % hull.size();
      double t = rng.uniform01();
      auto p = hull.point(pick);
      for (std::size_t i = 0; i < cand.size(); ++i)
        cand[i] = mn.point[i] + t * (p[i] - mn.point[i]);
      found = dual_norm_value(cand, spec) <= mn.norm_value + tau;
    }
    if (!found) continue;
    h = dual_map(cand, spec);
    for (auto& v : h) v = -v;
    double s = support_value(hull, h);
    report.min_support = std::min(report.min_support, s);
    report.max_support = std::max(report.max_support, s);
    if (s >= -delta * mn.norm_value) ++report.violations;
    ++report.trials_done;
  }
  report.violation_fraction =
      report.trials_done
          ? static_cast<double>(report.violations) / static_cast<double>(report.trials_done)
          : 0.0;
  return report;
}

double line_search(const FunctionOracle& oracle, std::span<const double> x,
                   std::span<const double> h, double fAh, double eps,
                   double armijo_c) {
  if (!(fAh < 0.0)) throw InvalidInputError("line_search needs a negative slope");
  if (!(eps > 0.0)) throw InvalidInputError("line_search needs eps > 0");
  const double fx = oracle.eval(x);
  Vec trial(x.size());
  double t = eps;
  for (int halving = 0; halving < 40; ++halving) {
    for (std::size_t i = 0; i < trial.size(); ++i) trial[i] = x[i] + t * h[i];
    if (oracle.eval(trial) <= fx + armijo_c * t * fAh) return t;
    t *= 0.5;
  }
  return 0.0;
}

void DescentConfig::validate() const {
  if (!(eps0 > 0.0) || !std::isfinite(eps0))
    throw InvalidInputError("eps0 must be positive");
  if (!(shrink > 0.0) || !(shrink < 1.0))
    throw InvalidInputError("shrink must lie in (0,1)");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw InvalidInputError("sigma must be positive");
  if (!(eps_min > 0.0)) throw InvalidInputError("eps_min must be positive");
  if (samples < 1) throw InvalidInputError("samples must be >= 1");
  if (!(armijo_c > 0.0) || !(armijo_c <= 1.0))
    throw InvalidInputError("armijo_c must lie in (0,1]");
  if (max_iter < 1) throw InvalidInputError("max_iter must be >= 1");
}

namespace {

HullSet build_hull(const FunctionOracle& oracle, const Vec& x, double eps,
                   const DescentConfig& config, std::size_t iter) {
  Region ball = BallRegion{x, eps, config.norm};
  if (config.prefer_exact && oracle.has_exact_subdiff())
    return HullSet(oracle.exact_region_subdiff(ball), Provenance{});
  return sample_ball_gradients(oracle, ball, config.samples,
                               mix_seed(config.seed, iter), config.workers);
}

TrajectoryRecord make_record(std::size_t iter, const Vec& x, double f, double eps,
                             double a_min_norm, std::optional<Vec> dir, double step,
                             std::size_t samples, StepStatus status, double wall) {
  TrajectoryRecord rec;
  rec.iter = iter;
  rec.x = x;
  rec.f = f;
  rec.eps = eps;
  rec.a_min_norm = a_min_norm;
  rec.direction = std::move(dir);
  rec.step = step;
  rec.samples = samples;
  rec.status = status;
  rec.wall_time_sec = wall;
  return rec;
}

}  // namespace

Trajectory run_descent(const FunctionOracle& oracle, Vec x0,
                       const DescentConfig& config, const RecordSink& sink) {
  config.validate();
  if (x0.size() != oracle.dim || !all_finite(x0))
    throw InvalidInputError("x0 must be finite and match the oracle dimension");

  Trajectory traj;
  traj.dim = oracle.dim;
  Vec x = std::move(x0);
  double eps = config.eps0;

  auto emit = [&](TrajectoryRecord rec) {
    if (sink) sink(rec);
    traj.records.push_back(std::move(rec));
  };

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  std::size_t iter = 0;
  for (; iter < config.max_iter; ++iter) {
    double fx = oracle.eval(x);
    HullSet hull = build_hull(oracle, x, eps, config, iter);
    double lip = oracle.lipschitz_bound ? oracle.lipschitz_bound(x, eps, config.norm)
                                        : 0.0;

    bool inconclusive = false;
    DescentCertificate cert;
    try {
      cert = descent_direction(hull, config.norm, config.sigma,
                               lip > 0.0 ? std::optional<double>(lip) : std::nullopt);
    } catch (const ConvergenceFailure& e) {
      // solver stalled: stationarity test is inconclusive, shrink the ball
      cert.a_min = e.best.point;
      cert.a_min_norm = e.best.norm_value;
      inconclusive = true;
    }

    if (!cert.direction || !(cert.directional_value < 0.0)) {
      // stationarity is only certified by a small minimal norm, never by a
      // direction whose sampled support came out nonnegative
      bool certified = !inconclusive && !cert.direction;
      if (certified && eps <= config.eps_min) {
        emit(make_record(iter, x, fx, eps, cert.a_min_norm, std::nullopt, 0.0,
                         hull.size(), StepStatus::stationary, elapsed()));
        traj.status = RunStatus::ApproximatelyStationary;
        traj.final_x = x;
        traj.final_f = fx;
        return traj;
      }
      emit(make_record(iter, x, fx, eps, cert.a_min_norm, std::nullopt, 0.0,
                       hull.size(), StepStatus::shrink, elapsed()));
      eps *= config.shrink;
      continue;
    }

    double t = line_search(oracle, x, *cert.direction, cert.directional_value, eps,
                           config.armijo_c);
    if (t == 0.0) {
      // the hull missed nearby kinks; a smaller ball is easier to approximate
      emit(make_record(iter, x, fx, eps, cert.a_min_norm, cert.direction, 0.0,
                       hull.size(), StepStatus::shrink, elapsed()));
      eps *= config.shrink;
      continue;
    }

    emit(make_record(iter, x, fx, eps, cert.a_min_norm, cert.direction, t,
                     hull.size(), StepStatus::step, elapsed()));
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += t * (*cert.direction)[i];
    eps = config.eps0;
  }

  emit(make_record(iter, x, oracle.eval(x), eps, 0.0, std::nullopt, 0.0, 0,
                   StepStatus::iter_limit, elapsed()));
  traj.status = RunStatus::IterationLimit;
  traj.final_x = x;
  traj.final_f = oracle.eval(x);
  return traj;
}

Trajectory naive_subgradient_run(const FunctionOracle& oracle, Vec x0, double step,
                                 std::size_t iterations, const RecordSink& sink) {
  if (!(step > 0.0)) throw InvalidInputError("step must be positive");
  if (x0.size() != oracle.dim || !all_finite(x0))
    throw InvalidInputError("x0 must be finite and match the oracle dimension");

  Trajectory traj;
  traj.dim = oracle.dim;
  Vec x = std::move(x0);

  auto emit = [&](TrajectoryRecord rec) {
    if (sink) sink(rec);
    traj.records.push_back(std::move(rec));
  };

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  std::size_t iter = 0;
  for (; iter < iterations; ++iter) {
    Vec g = oracle.grad_ae(x);
    double gnorm = norm2(g);
    if (gnorm == 0.0) break;
    Vec h(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) h[i] = -g[i] / gnorm;
    emit(make_record(iter, x, oracle.eval(x), 0.0, gnorm, h, step, 1,
                     StepStatus::step, elapsed()));
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += step * h[i];
  }
  emit(make_record(iter, x, oracle.eval(x), 0.0, 0.0, std::nullopt, 0.0, 0,
                   StepStatus::iter_limit, elapsed()));
  traj.status = RunStatus::IterationLimit;
  traj.final_x = x;
  traj.final_f = oracle.eval(x);
  return traj;
}

std::size_t sign_alternations(const Trajectory& trajectory) {
  if (trajectory.records.size() < 2 || trajectory.dim == 0) return 0;
  std::size_t best = 0;
  for (std::size_t d = 0; d < trajectory.dim; ++d) {
    std::size_t count = 0;
    for (std::size_t k = 1; k < trajectory.records.size(); ++k) {
      double prev = trajectory.records[k - 1].x[d];
      double cur = trajectory.records[k].x[d];
      if (prev * cur < 0.0) ++count;
    }
    best = std::max(best, count);
  }
  return best;
}

std::string step_status_name(StepStatus s) {
  switch (s) {
    case StepStatus::step:
      return "step";
    case StepStatus::shrink:
      return "shrink";
    case StepStatus::stationary:
      return "stationary";
    case StepStatus::iter_limit:
      return "iter_limit";
  }
  return "step";
}

StepStatus step_status_from_name(const std::string& name) {
  if (name == "step") return StepStatus::step;
  if (name == "shrink") return StepStatus::shrink;
  if (name == "stationary") return StepStatus::stationary;
  if (name == "iter_limit") return StepStatus::iter_limit;
  throw InvalidInputError("unknown trace status \"" + name + "\"");
}

}  // namespace setgrad
