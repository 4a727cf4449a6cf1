// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances are pinned in the checks themselves.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#if !defined(_WIN32)
#include <sys/wait.h>
#endif

#include "brute_oracles.hpp"
#include "setgrad/config.hpp"
#include "setgrad/descent.hpp"
#include "setgrad/minnorm.hpp"
#include "setgrad/trace.hpp"

using namespace setgrad;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

bool same_point_set(std::vector<Vec> a, std::vector<Vec> b) {
  if (a.size() != b.size()) return false;
  auto less = [](const Vec& x, const Vec& y) {
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
  };
  std::sort(a.begin(), a.end(), less);
  std::sort(b.begin(), b.end(), less);
  return a == b;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- criterion 1: the valley example end to end --------------------------

Check criterion_valley() {
  Check c;
  auto valley = make_valley(0.01);
  const std::vector<Vec> expected{{1.0, 0.01}, {-1.0, 0.01}};

  // exact hulls on straddling balls away from the origin
  for (const Vec& x : {Vec{0.02, 5.0}, Vec{-0.3, 2.0}, Vec{0.0, 1.2}}) {
    auto verts = valley.exact_ball_subdiff(x, 0.5, NormSpec::euclidean());
    c.require(same_point_set(verts, expected),
              "ball subdifferential is not {(+-1, 0.01)}");
  }

  HullSet hull = HullSet::exact(expected);
  MinNormResult mn = min_norm_point_euclidean(hull);
  c.require(std::fabs(mn.point[0] - 0.0) <= 1e-9 && std::fabs(mn.point[1] - 0.01) <= 1e-9,
            "min-norm point is not (0, 0.01) within 1e-9");
  DescentCertificate cert = descent_direction(hull, NormSpec::euclidean(), 1e-3);
  c.require(cert.direction.has_value(), "no direction certified");
  if (cert.direction) {
    c.require(std::fabs((*cert.direction)[0]) <= 1e-9 &&
                  std::fabs((*cert.direction)[1] + 1.0) <= 1e-9,
              "optimal direction is not (0, -1) within 1e-9");
  }

  DescentConfig cfg;
  cfg.eps0 = 0.5;
  cfg.eps_min = 1e-3;
  cfg.sigma = 1e-3;
  auto t0 = std::chrono::steady_clock::now();
  Trajectory traj = run_descent(valley, Vec{0.02, 5.0}, cfg);
  double elapsed = seconds_since(t0);
  c.require(traj.status == RunStatus::ApproximatelyStationary,
            "run did not stop ApproximatelyStationary");
  c.require(norm2(traj.final_x) <= 0.01, "final ||x||_2 above 0.01");
  for (std::size_t i = 1; i < traj.records.size(); ++i)
    if (traj.records[i - 1].status == StepStatus::step)
      c.require(traj.records[i].f < traj.records[i - 1].f,
                "f not strictly decreasing across an accepted step");
  c.require(elapsed < 1.0, "descent run took " + std::to_string(elapsed) + "s");

  Trajectory naive = naive_subgradient_run(valley, Vec{0.02, 5.0}, 0.05, 50);
  std::size_t x1_alternations = 0;
  for (std::size_t k = 1; k < naive.records.size(); ++k)
    if (naive.records[k - 1].x[0] * naive.records[k].x[0] < 0.0) ++x1_alternations;
  c.require(x1_alternations >= 10, "naive baseline alternated x1 only " +
                                       std::to_string(x1_alternations) + " times");
  return c;
}

// ---- criterion 2: Wolfe vs brute-force simplex grid ----------------------

Check criterion_min_norm_oracle() {
  Check c;
  Rng rng(0xC2);
  auto t0 = std::chrono::steady_clock::now();
  for (int rep = 0; rep < 100; ++rep) {
    std::size_t dim = rep % 2 ? 2 : 3;
    std::size_t count = 2 + rng.next_u64() % 4;  // 2..5 points
    std::vector<Vec> pts(count, Vec(dim));
    for (auto& p : pts)
      for (auto& v : p) v = rng.uniform(-2.0, 2.0);
    double brute = brute::min_norm_value(pts);
    MinNormResult r = min_norm_point_euclidean(HullSet::exact(pts));
    if (std::fabs(r.norm_value - brute) > 1e-6) {
      c.require(false, "hull " + std::to_string(rep) + ": wolfe " +
                           std::to_string(r.norm_value) + " vs brute " +
                           std::to_string(brute));
      break;
    }
  }
  double elapsed = seconds_since(t0);
  c.require(elapsed < 5.0, "took " + std::to_string(elapsed) + "s (budget 5s)");
  return c;
}

// ---- criterion 3: non-strictly-convex direction selection ----------------

Check criterion_polyhedral_directions() {
  Check c;
  {
    auto skew = make_skewed_abs();
    auto verts = skew.exact_ball_subdiff(Vec{1.0, 0.0}, 0.0, NormSpec::l1());
    HullSet hull = HullSet::exact(verts);
    DescentCertificate cert = descent_direction(hull, NormSpec::l1(), 0.5);
    c.require(cert.direction.has_value() && *cert.direction == Vec{-1.0, 0.0},
              "skewed_abs/l1 direction is not (-1,0)");
    c.require(cert.directional_value == -1.0, "skewed_abs/l1 support is not -1");
    c.require(support_value(hull, Vec{0.0, -1.0}) == 1.0,
              "rejected candidate (0,-1) does not score +1");
    // the face of a_min = (1,1) offers (0,-1); scoring must reject it
    bool saw_rejected = false;
    double best = 1e300;
    Vec best_h;
    for (const auto& v : dual_face(Vec{1.0, 1.0}, NormSpec::l1())) {
      Vec cand{-v[0], -v[1]};
      double s = support_value(hull, cand);
      if (cand == Vec{0.0, -1.0}) saw_rejected = s == 1.0;
      if (s < best) {
        best = s;
        best_h = cand;
      }
    }
    c.require(saw_rejected && best_h == Vec{-1.0, 0.0} && best == -1.0,
              "face scoring from a_min=(1,1) did not reject (0,-1)");
  }
  {
    auto hm = make_half_max();
    auto verts = hm.exact_ball_subdiff(Vec{0.0, 0.0}, 0.0, NormSpec::linf());
    HullSet hull = HullSet::exact(verts);
    DescentCertificate cert = descent_direction(hull, NormSpec::linf(), 0.5);
    c.require(cert.direction.has_value() && *cert.direction == Vec{-1.0, -1.0},
              "half_max/linf direction is not (-1,-1)");
    c.require(cert.directional_value == -1.0, "half_max/linf support is not -1");
    c.require(support_value(hull, Vec{-1.0, 1.0}) == 1.0,
              "rejected candidate (-1,1) does not score +1");
    bool saw_rejected = false;
    double best = 1e300;
    Vec best_h;
    for (const auto& v : dual_face(Vec{1.0, 0.0}, NormSpec::linf())) {
      Vec cand{-v[0], -v[1]};
      double s = support_value(hull, cand);
      if (cand == Vec{-1.0, 1.0}) saw_rejected = s == 1.0;
      if (s < best) {
        best = s;
        best_h = cand;
      }
    }
    c.require(saw_rejected && best_h == Vec{-1.0, -1.0} && best == -1.0,
              "face scoring from a_min=(1,0) did not reject (-1,1)");
  }
  return c;
}

// ---- criterion 4: semicontinuity on segments ------------------------------

Check criterion_semicontinuity() {
  Check c;
  auto abs1 = make_abs1d();
  for (double k : {1.0, 2.0, 4.0, 8.0}) {
    Region seg = SegmentRegion{Vec{1.0 / k}, Vec{1.0}};
    HullSet hull = HullSet::exact(abs1.exact_region_subdiff(seg));
    c.require(support_value(hull, Vec{-1.0}) == -1.0,
              "f°([1/k,1]; -1) != -1 for k=" + std::to_string(k));
  }
  {
    Region seg = SegmentRegion{Vec{0.0}, Vec{1.0}};
    HullSet hull = HullSet::exact(abs1.exact_region_subdiff(seg));
    c.require(support_value(hull, Vec{-1.0}) == 1.0, "f°([0,1]; -1) != +1");
  }
  const std::vector<Vec> limit{{-1.0}, {1.0}};
  for (double k : {1.0, 2.0, 4.0, 8.0}) {
    Region seg = SegmentRegion{Vec{-1.0 / k}, Vec{1.0}};
    auto verts = abs1.exact_region_subdiff(seg);
    c.require(same_point_set(verts, limit), "nested hull is not {-1,+1}");
    c.require(support_value(HullSet::exact(verts), Vec{-1.0}) == 1.0,
              "nested f° != +1");
    c.require(hausdorff_distance(verts, limit, NormSpec::euclidean()) == 0.0,
              "nested hulls do not converge to the limit hull");
  }
  return c;
}

// ---- criterion 5: duality gap ---------------------------------------------

Check criterion_duality_gap() {
  Check c;
  Rng rng(0xC5);
  for (int rep = 0; rep < 20; ++rep) {
    MaxAffineSpec spec;
    spec.dim = 2;
    std::size_t pieces = 2 + rng.next_u64() % 4;
    for (std::size_t k = 0; k < pieces; ++k)
      spec.pieces.push_back({{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)},
                             rng.uniform(-0.3, 0.3)});
    auto oracle = make_max_affine(spec);
    Vec x{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
    auto verts = oracle.exact_ball_subdiff(x, rng.uniform(0.2, 0.8),
                                           NormSpec::euclidean());
    double gap = minmax_gap(HullSet::exact(verts), NormSpec::euclidean(), 10000,
                            1000 + rep);
    if (gap > 1e-3) {
      c.require(false, "random instance " + std::to_string(rep) + " gap " +
                           std::to_string(gap));
      break;
    }
  }
  struct Named {
    std::vector<Vec> pts;
    NormSpec spec;
  };
  const Named paper_hulls[] = {
      {{{1.0, 0.01}, {-1.0, 0.01}}, NormSpec::euclidean()},
      {{{1.0, -1.0}, {1.0, 1.0}}, NormSpec::l1()},
      {{{1.0, 0.0}, {0.0, 1.0}}, NormSpec::linf()},
  };
  int idx = 0;
  for (const auto& named : paper_hulls) {
    double gap = minmax_gap(HullSet::exact(named.pts), named.spec, 10000, 7 + idx);
    c.require(gap <= 1e-3, "paper hull " + std::to_string(idx) + " gap " +
                               std::to_string(gap));
    ++idx;
  }
  return c;
}

// ---- criterion 6: descent estimate ----------------------------------------

Check criterion_descent_estimate() {
  Check c;
  Rng rng(0xC6);
  int done = 0;
  while (done < 1000) {
    MaxAffineSpec spec;
    spec.dim = 2;
    std::size_t pieces = 2 + rng.next_u64() % 5;
    for (std::size_t k = 0; k < pieces; ++k)
      spec.pieces.push_back({{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)},
                             rng.uniform(-0.5, 0.5)});
    auto oracle = make_max_affine(spec);
    Vec x{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    double eps = rng.uniform(0.1, 1.0);
    HullSet hull =
        HullSet::exact(oracle.exact_ball_subdiff(x, eps, NormSpec::euclidean()));
    Vec h{rng.gaussian(), rng.gaussian()};
    double nrm = norm2(h);
    if (nrm == 0.0) continue;
    for (auto& v : h) v /= nrm;
    double fAh = support_value(hull, h);
    if (!(fAh < 0.0)) continue;
    double t = rng.uniform01_open_low() * eps;  // t ||h|| <= eps
    Vec xt{x[0] + t * h[0], x[1] + t * h[1]};
    if (oracle.eval(xt) > oracle.eval(x) + t * fAh + 1e-12) {
      c.require(false, "violation at instance " + std::to_string(done));
      break;
    }
    ++done;
  }
  return c;
}

// ---- criterion 7: stability radius ----------------------------------------

Check criterion_stability() {
  Check c;
  auto valley = make_valley(0.01);
  HullSet hull = HullSet::exact(
      valley.exact_ball_subdiff(Vec{0.02, 5.0}, 0.5, NormSpec::euclidean()));
  const double L = 1.0;  // the rank used by this criterion
  DescentCertificate cert = descent_direction(hull, NormSpec::euclidean(), 1e-6, L);
  c.require(cert.direction.has_value(), "no direction on the valley hull");
  if (!cert.direction) return c;
  const Vec& ht = *cert.direction;
  const double radius = cert.a_min_norm / L;

  Rng rng(0xC7);
  for (int rep = 0; rep < 1000; ++rep) {
    // uniform draw from the open euclidean disk of the stability radius
    double angle = rng.uniform(0.0, 6.283185307179586);
    double r = radius * std::sqrt(rng.uniform01());
    Vec h{ht[0] + r * std::cos(angle), ht[1] + r * std::sin(angle)};
    if (!(norm2(Vec{h[0] - ht[0], h[1] - ht[1]}) < radius)) continue;
    if (!(support_value(hull, h) < 0.0)) {
      c.require(false, "perturbed direction fails to descend at trial " +
                           std::to_string(rep));
      break;
    }
  }

  // sharpness: at 1.5x the radius some sampled direction no longer descends
  bool witness = false;
  for (int rep = 0; rep < 1000 && !witness; ++rep) {
    double angle = rng.uniform(0.0, 6.283185307179586);
    double r = 1.5 * radius;
    Vec h{ht[0] + r * std::cos(angle), ht[1] + r * std::sin(angle)};
    witness = support_value(hull, h) >= 0.0;
  }
  c.require(witness, "no non-descending direction found at 1.5x the radius");
  return c;
}

// ---- criterion 8: dual-map contracts --------------------------------------

Check criterion_dual_map() {
  Check c;
  Rng rng(0xC8);
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    NormSpec spec = p == 2.0 ? NormSpec::euclidean() : NormSpec::p(p);
    for (int rep = 0; rep < 10000; ++rep) {
      std::size_t n = 2 + rng.next_u64() % 4;
      Vec a(n);
      double m = 0.0;
      do {
        for (auto& v : a) v = rng.uniform(-10.0, 10.0);
        m = 0.0;
        for (double v : a) m = std::max(m, std::fabs(v));
      } while (m < 1e-6);
      Vec j = dual_map(a, spec);
      if (std::fabs(dot(a, j) - dual_norm_value(a, spec)) > 1e-10 ||
          std::fabs(norm_value(j, spec) - 1.0) > 1e-10) {
        c.require(false, "contract violated at p=" + std::to_string(p) +
                             " rep=" + std::to_string(rep));
        return c;
      }
    }
  }
  return c;
}

// ---- criterion 9: sampling consistency ------------------------------------

Check criterion_sampling_consistency() {
  Check c;
  struct Case {
    FunctionOracle oracle;
    Vec center;
  };
  std::vector<Case> cases;
  cases.push_back({make_valley(0.01), {0.02, 5.0}});
  cases.push_back({make_skewed_abs(), {1.0, 0.02}});
  cases.push_back({make_half_max(), {0.0, 0.0}});
  for (const auto& cs : cases) {
    Region ball = BallRegion{cs.center, 0.5, NormSpec::euclidean()};
    auto exact = cs.oracle.exact_region_subdiff(ball);
    HullSet sampled = sample_ball_gradients(cs.oracle, ball, 4096, 424242);
    double d = hausdorff_distance(sampled.points(), exact, NormSpec::euclidean());
    c.require(d <= 1e-12, cs.oracle.name + ": hausdorff " + std::to_string(d));
  }
  return c;
}

// ---- criterion 10: byte-identical traces through the CLI ------------------

Check criterion_determinism() {
  Check c;
#ifndef SETGRAD_CLI_PATH
  c.require(false, "CLI path not configured");
#else
  auto slurp = [](const char* path) {
    std::ifstream is(path, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
  };
  const std::string args =
      " run --fn valley --alpha 0.01 --x0 0.02,5 --eps 0.5 --sigma 1e-3 "
      "--sampled --samples 64 --seed 31 --out ";
  int rc1 = std::system(("\"" SETGRAD_CLI_PATH "\"" + args +
                         "acc_trace_a.csv > acc_run_a.json 2>&1")
                            .c_str());
  int rc2 = std::system(("\"" SETGRAD_CLI_PATH "\"" + args +
                         "acc_trace_b.csv > acc_run_b.json 2>&1")
                            .c_str());
#if !defined(_WIN32)
  rc1 = WEXITSTATUS(rc1);
  rc2 = WEXITSTATUS(rc2);
#endif
  c.require(rc1 == 0 && rc2 == 0, "CLI runs failed");
  std::string a = slurp("acc_trace_a.csv");
  std::string b = slurp("acc_trace_b.csv");
  c.require(!a.empty() && a == b, "trace bytes differ between identical runs");
  for (const char* f : {"acc_trace_a.csv", "acc_trace_b.csv", "acc_run_a.json",
                        "acc_run_b.json"})
    std::remove(f);
#endif
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    const char* label;
    std::function<Check()> fn;
  };
  const Criterion criteria[] = {
      {"valley example: exact hull, certificate, full run, baseline",
       criterion_valley},
      {"min-norm oracle equivalence on 100 random hulls", criterion_min_norm_oracle},
      {"non-strictly-convex direction selection (l1/linf)",
       criterion_polyhedral_directions},
      {"semicontinuity on segment regions", criterion_semicontinuity},
      {"duality gap on random max-affine + named hulls", criterion_duality_gap},
      {"descent estimate on 1000 random instances", criterion_descent_estimate},
      {"stability radius: interior descends, 1.5x does not", criterion_stability},
      {"dual-map pairing and unit-norm contracts", criterion_dual_map},
      {"sampling consistency at m=4096", criterion_sampling_consistency},
      {"byte-identical traces for identical config+seed", criterion_determinism},
  };

  int failures = 0;
  int idx = 1;
  for (const auto& criterion : criteria) {
    Check c = criterion.fn();
    if (c.ok) {
      std::printf("[PASS] %2d. %s\n", idx, criterion.label);
    } else {
      std::printf("[FAIL] %2d. %s: %s\n", idx, criterion.label, c.detail.c_str());
      ++failures;
    }
    std::fflush(stdout);
    ++idx;
  }
  std::printf("%d/10 acceptance criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
