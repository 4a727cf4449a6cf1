#include <doctest.h>

#include <cmath>

#include "brute_oracles.hpp"
#include "setgrad/minnorm.hpp"
#include "setgrad/rng.hpp"

using namespace setgrad;

namespace {

HullSet make_hull(std::vector<Vec> pts) { return HullSet::exact(std::move(pts)); }

std::vector<Vec> random_points(std::size_t count, std::size_t dim, Rng& rng,
                               double lo = -2.0, double hi = 2.0) {
  std::vector<Vec> pts(count, Vec(dim));
  for (auto& p : pts)
    for (auto& v : p) v = rng.uniform(lo, hi);
  return pts;
}

}  // namespace

TEST_CASE("wolfe on the frozen examples") {
  {
    MinNormResult r = min_norm_point_euclidean(make_hull({{1.0, 0.01}, {-1.0, 0.01}}));
    CHECK(r.point[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.point[1] == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(r.coefficients[0] == doctest::Approx(0.5));
    CHECK(r.coefficients[1] == doctest::Approx(0.5));
    CHECK(r.norm_value == doctest::Approx(0.01));
  }
  {
    MinNormResult r = min_norm_point_euclidean(make_hull({{2.0, -1.0, 0.5}}));
    CHECK(r.point == Vec{2.0, -1.0, 0.5});
    CHECK(r.coefficients == Vec{1.0});
  }
  {
    // minimize ||lambda (1,0) + (1-lambda) (0,1)||: lambda = 1/2
    MinNormResult r = min_norm_point_euclidean(make_hull({{1.0, 0.0}, {0.0, 1.0}}));
    CHECK(r.point[0] == doctest::Approx(0.5));
    CHECK(r.point[1] == doctest::Approx(0.5));
  }
  {
    MinNormResult r = min_norm_point_euclidean(make_hull({{0.0, 0.0}, {1.0, 2.0}}));
    CHECK(r.norm_value == doctest::Approx(0.0).epsilon(1e-10));
  }
}

TEST_CASE("wolfe result is reproducible from its coefficients") {
  Rng rng(31);
  for (int rep = 0; rep < 50; ++rep) {
    auto pts = random_points(2 + rng.next_u64() % 5, 2 + rng.next_u64() % 2, rng);
    HullSet hull = make_hull(pts);
    MinNormResult r = min_norm_point_euclidean(hull);
    double sum = 0.0;
    Vec recon(hull.dim(), 0.0);
    for (std::size_t i = 0; i < hull.size(); ++i) {
      CHECK(r.coefficients[i] >= 0.0);
      sum += r.coefficients[i];
      for (std::size_t d = 0; d < hull.dim(); ++d)
        recon[d] += r.coefficients[i] * hull.point(i)[d];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(linf_diff(recon, r.point) <= 1e-12);
    // variational inequality at the reported tolerance
    for (std::size_t i = 0; i < hull.size(); ++i) {
      Vec diff(hull.dim());
      for (std::size_t d = 0; d < hull.dim(); ++d)
        diff[d] = hull.point(i)[d] - r.point[d];
      CHECK(dot(r.point, diff) >= -1e-9);
    }
  }
}

TEST_CASE("wolfe matches the brute-force simplex oracle") {
  Rng rng(32);
  for (int rep = 0; rep < 40; ++rep) {
    std::size_t dim = rep % 2 ? 2 : 3;
    auto pts = random_points(2 + rng.next_u64() % 4, dim, rng);
    double brute = brute::min_norm_value(pts);
    MinNormResult r = min_norm_point_euclidean(make_hull(pts));
    CHECK(r.norm_value == doctest::Approx(brute).epsilon(1e-6));
  }
}

TEST_CASE("scale equivariance") {
  Rng rng(33);
  for (double c : {2.0, 10.0, 397.5}) {
    auto pts = random_points(4, 3, rng);
    auto scaled = pts;
    for (auto& p : scaled)
      for (auto& v : p) v *= c;
    MinNormResult base = min_norm_point_euclidean(make_hull(pts));
    MinNormResult big = min_norm_point_euclidean(make_hull(scaled));
    CHECK(big.norm_value == doctest::Approx(c * base.norm_value).epsilon(1e-9));
    for (std::size_t d = 0; d < 3; ++d)
      CHECK(big.point[d] == doctest::Approx(c * base.point[d]).epsilon(1e-9));
  }
}

TEST_CASE("zero membership characterization on random hulls") {
  Rng rng(34);
  for (int rep = 0; rep < 60; ++rep) {
    auto pts = random_points(3 + rng.next_u64() % 3, 2, rng);
    HullSet hull = make_hull(pts);
    MinNormResult r = min_norm_point_euclidean(hull);
    double diam = 0.0;
    for (const auto& p : pts) diam = std::max(diam, 2.0 * norm2(p));
    if (r.norm_value <= 1e-12 * std::max(1.0, diam)) {
      // 0 in the hull: no sampled unit direction can have negative support
      Rng dir_rng(rep);
      for (int s = 0; s < 10000; ++s) {
        Vec h{dir_rng.gaussian(), dir_rng.gaussian()};
        double nrm = norm2(h);
        if (nrm == 0.0) continue;
        for (auto& v : h) v /= nrm;
        CHECK(support_value(hull, h) >= -1e-9 * std::max(1.0, diam));
      }
    } else {
      // otherwise the normalized min-norm point witnesses a negative support
      Vec h = r.point;
      for (auto& v : h) v = -v / r.norm_value;
      CHECK(support_value(hull, h) < 0.0);
    }
  }
}

TEST_CASE("translation cross-check against an independent projection") {
  Rng rng(35);
  for (int rep = 0; rep < 25; ++rep) {
    auto pts = random_points(4, 2, rng);
    Vec t{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    auto shifted = pts;
    for (auto& p : shifted)
      for (std::size_t d = 0; d < 2; ++d) p[d] += t[d];
    MinNormResult r = min_norm_point_euclidean(make_hull(shifted));
    // min-norm of (H + t) = t + projection of -t onto conv(H)
    Vec neg_t{-t[0], -t[1]};
    Vec lam;
    brute::project_distance(pts, neg_t, &lam);
    Vec proj(2, 0.0);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t d = 0; d < 2; ++d) proj[d] += lam[i] * pts[i][d];
    CHECK(r.point[0] == doctest::Approx(proj[0] + t[0]).epsilon(1e-5));
    CHECK(r.point[1] == doctest::Approx(proj[1] + t[1]).epsilon(1e-5));
  }
}

TEST_CASE("general solver: the two polyhedral examples are exact") {
  {
    // skewed_abs gradient at (1,0): every hull point has sup-norm 1
    MinNormResult r =
        min_dual_norm_point(make_hull({{1.0, -1.0}, {1.0, 1.0}}), NormSpec::l1());
    CHECK(r.norm_value == 1.0);
    CHECK(r.tolerance_achieved <= 1e-8);
  }
  {
    // half_max gradient at 0: every hull point has 1-norm 1
    MinNormResult r =
        min_dual_norm_point(make_hull({{1.0, 0.0}, {0.0, 1.0}}), NormSpec::linf());
    CHECK(r.norm_value == 1.0);
  }
  {
    MinNormResult r =
        min_dual_norm_point(make_hull({{0.0, 0.0}, {3.0, -2.0}}), NormSpec::l1());
    CHECK(r.norm_value <= 1e-8);
  }
}

TEST_CASE("general solver delegates euclidean instances to wolfe") {
  MinNormResult r = min_dual_norm_point(make_hull({{1.0, 0.01}, {-1.0, 0.01}}),
                                        NormSpec::euclidean());
  CHECK(r.point[0] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(r.point[1] == doctest::Approx(0.01));
  CHECK(r.tolerance_achieved <= 1e-8);
}

TEST_CASE("general solver handles a p-norm instance") {
  // minimize ||(lambda, 1-lambda)||_3 (dual of p = 1.5): symmetric optimum
  HullSet hull = make_hull({{1.0, 0.0}, {0.0, 1.0}});
  MinNormResult r = min_dual_norm_point(hull, NormSpec::p(1.5), 1e-7, 200000);
  double expected = std::pow(2.0 * std::pow(0.5, 3.0), 1.0 / 3.0);
  CHECK(r.norm_value == doctest::Approx(expected).epsilon(1e-5));
  CHECK(r.coefficients[0] == doctest::Approx(0.5).epsilon(1e-2));
}

TEST_CASE("convergence failure carries the best iterate") {
  HullSet hull = make_hull({{1.0, 0.0}, {0.0, 1.0}, {0.3, 0.4}});
  CHECK_THROWS_AS(min_dual_norm_point(hull, NormSpec::p(3.0), 1e-16, 2),
                  ConvergenceFailure);
  try {
    min_dual_norm_point(hull, NormSpec::p(3.0), 1e-16, 2);
  } catch (const ConvergenceFailure& e) {
    CHECK(e.best.point.size() == 2);
    CHECK(e.best.norm_value > 0.0);
    CHECK(e.best.coefficients.size() == 3);
  }
}

TEST_CASE("minmax gap closes on the frozen hulls") {
  CHECK(minmax_gap(make_hull({{0.0, 1.0}}), NormSpec::euclidean(), 10000, 1) <= 1e-3);
  CHECK(minmax_gap(make_hull({{1.0, 0.01}, {-1.0, 0.01}}), NormSpec::euclidean(),
                   10000, 2) <= 1e-3);
  CHECK(minmax_gap(make_hull({{1.0, -1.0}, {1.0, 1.0}}), NormSpec::l1(), 10000, 3) <=
        1e-3);
  CHECK_THROWS_AS(minmax_gap(make_hull({Vec(4, 1.0)}), NormSpec::euclidean(), 10, 1),
                  InvalidInputError);
}
