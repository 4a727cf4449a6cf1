// Test-only reference solvers, kept independent of the library's
// implementation paths on purpose: plain coarse-grid enumeration over the
// simplex followed by local pattern refinement.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "setgrad/vec.hpp"

namespace brute {

using setgrad::Vec;

inline double combo_norm2(const std::vector<Vec>& pts, const Vec& lam, const Vec& target) {
  const std::size_t dim = pts[0].size();
  double s = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    double v = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) v += lam[i] * pts[i][d];
    v -= target[d];
    s += v * v;
  }
  return std::sqrt(s);
}

// every lambda on the simplex with entries in multiples of 1/resolution
inline void enumerate_simplex(std::size_t k, std::size_t resolution,
                              const std::function<void(const Vec&)>& visit) {
  Vec lam(k, 0.0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t idx,
                                                          std::size_t left) {
    if (idx + 1 == k) {
      lam[idx] = static_cast<double>(left) / static_cast<double>(resolution);
      visit(lam);
      return;
    }
    for (std::size_t take = 0; take <= left; ++take) {
      lam[idx] = static_cast<double>(take) / static_cast<double>(resolution);
      rec(idx + 1, left - take);
    }
  };
  rec(0, resolution);
}

// min over conv(pts) of ||x - target||_2: coarse grid (step 1/10, which
// walks through the 1e-3 scale during refinement) plus pattern moves along
// simplex edges with a halving step
inline double project_distance(const std::vector<Vec>& pts, const Vec& target,
                               Vec* lam_out = nullptr) {
  const std::size_t k = pts.size();
  Vec best_lam(k, 0.0);
  double best = std::numeric_limits<double>::infinity();
  enumerate_simplex(k, 10, [&](const Vec& lam) {
    double v = combo_norm2(pts, lam, target);
    if (v < best) {
      best = v;
      best_lam = lam;
    }
  });
  double w = 0.1;
  while (w > 1e-10) {
    bool improved = false;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        if (i == j) continue;
        double move = std::min(w, best_lam[j]);
        if (move <= 0.0) continue;
        Vec cand = best_lam;
        cand[i] += move;
        cand[j] -= move;
        double v = combo_norm2(pts, cand, target);
        if (v < best) {
          best = v;
          best_lam = cand;
          improved = true;
        }
      }
    }
    if (!improved) w *= 0.5;
  }
  if (lam_out) *lam_out = best_lam;
  return best;
}

inline double min_norm_value(const std::vector<Vec>& pts, Vec* lam_out = nullptr) {
  return project_distance(pts, Vec(pts[0].size(), 0.0), lam_out);
}

}  // namespace brute
