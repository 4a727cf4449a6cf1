#include "setgrad/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "setgrad/errors.hpp"

namespace setgrad {

namespace {

constexpr double kActivityTol = 1e-12;
constexpr std::size_t kEnumCap = 16;  // sign patterns grow as 2^kinks

void dedup_exact(std::vector<Vec>& verts) {
  std::vector<Vec> out;
  for (auto& v : verts) {
    bool dup = false;
    for (const auto& u : out)
      if (u == v) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(std::move(v));
  }
  verts = std::move(out);
}

// ---------------------------------------------------------------------------
// Separable family: f(x) = <g0, x> + sum_i w_i |x_i|, w_i >= 0.
// The gradient of f on a region is the hull of g0 + s.w over the sign
// patterns s that the region meets, which is decidable in closed form.
// ---------------------------------------------------------------------------

struct Separable {
  Vec g0;
  Vec w;
};

double sep_eval(const Separable& s, std::span<const double> x) {
  double v = dot(s.g0, x);
  for (std::size_t i = 0; i < x.size(); ++i) v += s.w[i] * std::fabs(x[i]);
  return v;
}

Vec sep_grad(const Separable& s, std::span<const double> x) {
  Vec g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double sign = x[i] < 0.0 ? -1.0 : 1.0;  // kink points take the + branch
    g[i] = s.g0[i] + s.w[i] * sign;
  }
  return g;
}

std::vector<std::size_t> sep_kinks(const Separable& s) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < s.w.size(); ++i)
    if (s.w[i] > 0.0) idx.push_back(i);
  return idx;
}

Vec sep_vertex(const Separable& s, const std::vector<std::size_t>& kinks,
               const std::vector<int>& signs) {
  Vec v = s.g0;
  for (std::size_t k = 0; k < kinks.size(); ++k)
    v[kinks[k]] += s.w[kinks[k]] * static_cast<double>(signs[k]);
  return v;
}

std::vector<Vec> sep_region_subdiff(const Separable& s, const Region& region) {
  const auto kinks = sep_kinks(s);
  if (kinks.size() > kEnumCap)
    throw UnsupportedError("too many kink coordinates to enumerate");
  const std::size_t n = s.g0.size();
  std::vector<Vec> verts;

  if (const auto* ball = std::get_if<BallRegion>(&region)) {
    // Coordinate i spans [x_i - eps, x_i + eps] over the ball regardless of
    // the ball norm, so per-coordinate sign feasibility is exact; joint
    // feasibility of a pattern is dist(x, orthant) = ||violations|| <= eps.
    const Vec& x = ball->center;
    const double eps = ball->radius;
    std::vector<std::size_t> ambiguous;
    std::vector<int> base(kinks.size());
    for (std::size_t k = 0; k < kinks.size(); ++k) {
      std::size_t i = kinks[k];
      bool pos = x[i] + eps >= 0.0;
      bool neg = x[i] - eps <= 0.0;
      base[k] = pos ? 1 : -1;
      if (pos && neg) ambiguous.push_back(k);
    }
    const std::size_t count = std::size_t{1} << ambiguous.size();
    for (std::size_t bits = 0; bits < count; ++bits) {
      std::vector<int> signs = base;
      for (std::size_t k = 0; k < ambiguous.size(); ++k)
        signs[ambiguous[k]] = (bits >> k) & 1 ? 1 : -1;
      Vec viol(n, 0.0);
      for (std::size_t k = 0; k < kinks.size(); ++k) {
        std::size_t i = kinks[k];
        if (static_cast<double>(signs[k]) * x[i] < 0.0) viol[i] = std::fabs(x[i]);
      }
      if (norm_value(viol, ball->norm) <= eps)
        verts.push_back(sep_vertex(s, kinks, signs));
    }
  } else if (const auto* box = std::get_if<BoxRegion>(&region)) {
    const std::size_t count = std::size_t{1} << kinks.size();
    for (std::size_t bits = 0; bits < count; ++bits) {
      std::vector<int> signs(kinks.size());
      bool ok = true;
      for (std::size_t k = 0; k < kinks.size() && ok; ++k) {
        std::size_t i = kinks[k];
        signs[k] = (bits >> k) & 1 ? 1 : -1;
        ok = signs[k] > 0 ? box->hi[i] >= 0.0 : box->lo[i] <= 0.0;
      }
      if (ok) verts.push_back(sep_vertex(s, kinks, signs));
    }
  } else {
    const auto& seg = std::get<SegmentRegion>(region);
    const std::size_t count = std::size_t{1} << kinks.size();
    for (std::size_t bits = 0; bits < count; ++bits) {
      std::vector<int> signs(kinks.size());
      double lo = 0.0, hi = 1.0;
      bool ok = true;
      for (std::size_t k = 0; k < kinks.size() && ok; ++k) {
        std::size_t i = kinks[k];
        signs[k] = (bits >> k) & 1 ? 1 : -1;
        double sa = signs[k] * seg.a[i];
        double sd = signs[k] * (seg.b[i] - seg.a[i]);
        if (sd == 0.0) {
          ok = sa >= 0.0;
        } else if (sd > 0.0) {
          lo = std::max(lo, -sa / sd);
        } else {
          hi = std::min(hi, -sa / sd);
        }
      }
      if (ok && lo <= hi) verts.push_back(sep_vertex(s, kinks, signs));
    }
  }
  dedup_exact(verts);
  return verts;
}

// ---------------------------------------------------------------------------
// Max-affine activity. Piece k attains the max somewhere on region A iff
//
//   g* = max_{y in A} min_{j != k} [ <c_k - c_j, y> + b_k - b_j ] >= 0,
//
// and by minimax g* = min over simplex weights lambda of
// F(lambda) = support_A(c_k - sum lambda_j c_j) + b_k - sum lambda_j b_j.
// Any feasible lambda upper-bounds g*, so a value below -tol certifies
// inactivity while failing to find one keeps the piece (hull supersets are
// harmless, missing vertices are not).
// ---------------------------------------------------------------------------

// Direct search over the probability simplex along e_i - e_j edges with a
// shrinking step; adequate for the convex objectives and small piece counts
// used here.
template <class F>
double simplex_pattern_min(const F& f, std::size_t k, double w0, double w_min,
                           std::size_t max_evals) {
  Vec lam(k, 1.0 / static_cast<double>(k));
  double best = f(lam);
  std::size_t evals = 1;
  for (std::size_t i = 0; i < k; ++i) {
    Vec v(k, 0.0);
    v[i] = 1.0;
    double val = f(v);
    ++evals;
    if (val < best) {
      best = val;
      lam = v;
    }
  }
  double w = w0;
  while (w > w_min && evals < max_evals) {
    bool improved = false;
    for (std::size_t i = 0; i < k && evals < max_evals; ++i) {
      for (std::size_t j = 0; j < k && evals < max_evals; ++j) {
        if (i == j) continue;
        double move = std::min(w, lam[j]);
        if (move <= 0.0) continue;
        Vec cand = lam;
        cand[i] += move;
        cand[j] -= move;
        double val = f(cand);
        ++evals;
        if (val < best) {
          best = val;
          lam = std::move(cand);
          improved = true;
        }
      }
    }
    if (!improved) w *= 0.5;
  }
  return best;
}

bool max_affine_piece_active(const MaxAffineSpec& spec, std::size_t k,
                             const Region& region) {
  const std::size_t m = spec.pieces.size();
  if (m == 1) return true;
  const Vec& ck = spec.pieces[k].c;
  const double bk = spec.pieces[k].b;

  // cheap certificate: the piece attains the max at the region center
  Vec center = region_center(region);
  double fk = dot(ck, center) + bk;
  double fmax = -std::numeric_limits<double>::infinity();
  for (const auto& piece : spec.pieces)
    fmax = std::max(fmax, dot(piece.c, center) + piece.b);
  if (fk >= fmax - kActivityTol) return true;

  std::vector<std::size_t> others;
  for (std::size_t j = 0; j < m; ++j)
    if (j != k) others.push_back(j);

  const std::size_t n = spec.dim;
  auto objective = [&](const Vec& lam) {
    Vec c(n);
    double b = bk;
    for (std::size_t d = 0; d < n; ++d) c[d] = ck[d];
    for (std::size_t t = 0; t < others.size(); ++t) {
      const auto& piece = spec.pieces[others[t]];
      for (std::size_t d = 0; d < n; ++d) c[d] -= lam[t] * piece.c[d];
      b -= lam[t] * piece.b;
    }
    return region_support(region, c) + b;
  };

  // vertices of the simplex first; one negative value already certifies
  for (std::size_t t = 0; t < others.size(); ++t) {
    Vec v(others.size(), 0.0);
    v[t] = 1.0;
    if (objective(v) < -kActivityTol) return false;
  }
  if (others.size() == 1) return true;
  double found = simplex_pattern_min(objective, others.size(), 0.25, 1e-7, 20000);
  return found >= -kActivityTol;
}

std::vector<Vec> max_affine_region_subdiff(const MaxAffineSpec& spec,
                                           const Region& region) {
  std::vector<Vec> verts;
  for (std::size_t k = 0; k < spec.pieces.size(); ++k)
    if (max_affine_piece_active(spec, k, region)) verts.push_back(spec.pieces[k].c);
  dedup_exact(verts);
  return verts;
}

// Lipschitz rank on a ball from the exact vertex set: the largest dual norm
// over the gradient hull is a valid rank on any convex region.
double pwa_lipschitz(const std::function<std::vector<Vec>(const Region&)>& subdiff,
                     std::span<const double> center, double radius,
                     const NormSpec& norm) {
  Region ball = BallRegion{Vec(center.begin(), center.end()), radius, norm};
  double best = 0.0;
  for (const auto& v : subdiff(ball)) best = std::max(best, dual_norm_value(v, norm));
  return best;
}

FunctionOracle make_separable(Vec g0, Vec w, std::string name) {
  if (g0.size() != w.size() || g0.empty())
    throw InvalidInputError("separable oracle: dimension mismatch");
  if (!all_finite(g0) || !all_finite(w))
    throw InvalidInputError("separable oracle: non-finite parameter");
  for (double wi : w)
    if (wi < 0.0) throw InvalidInputError("separable oracle: negative weight");
  auto sep = std::make_shared<Separable>(Separable{std::move(g0), std::move(w)});
  FunctionOracle oracle;
  oracle.dim = sep->g0.size();
  oracle.name = std::move(name);
  oracle.eval = [sep](std::span<const double> x) { return sep_eval(*sep, x); };
  oracle.grad_ae = [sep](std::span<const double> x) { return sep_grad(*sep, x); };
  oracle.exact_region_subdiff = [sep, dim = oracle.dim](const Region& region) {
    region_validate(region, dim);
    return sep_region_subdiff(*sep, region);
  };
  auto subdiff = oracle.exact_region_subdiff;
  oracle.lipschitz_bound = [subdiff](std::span<const double> c, double r,
                                     const NormSpec& nrm) {
    return pwa_lipschitz(subdiff, c, r, nrm);
  };
  return oracle;
}

}  // namespace

MaxAffineSpec max_affine_from_json(const nlohmann::json& j) {
  MaxAffineSpec spec;
  if (!j.is_object() || !j.contains("dim") || !j.contains("pieces"))
    throw InvalidInputError("max_affine json needs {\"dim\": n, \"pieces\": [...]}");
  spec.dim = j.at("dim").get<std::size_t>();
  if (spec.dim == 0) throw InvalidInputError("max_affine: dim must be positive");
  for (const auto& pj : j.at("pieces")) {
    MaxAffinePiece piece;
    piece.c = pj.at("c").get<Vec>();
    piece.b = pj.value("b", 0.0);
    if (piece.c.size() != spec.dim)
      throw InvalidInputError("max_affine: piece dimension mismatch");
    if (!all_finite(piece.c) || !std::isfinite(piece.b))
      throw InvalidInputError("max_affine: non-finite piece");
    spec.pieces.push_back(std::move(piece));
  }
  if (spec.pieces.empty()) throw InvalidInputError("max_affine: needs >= 1 piece");
  return spec;
}

nlohmann::json max_affine_to_json(const MaxAffineSpec& spec) {
  nlohmann::json pieces = nlohmann::json::array();
  for (const auto& piece : spec.pieces)
    pieces.push_back({{"c", piece.c}, {"b", piece.b}});
  return {{"dim", spec.dim}, {"pieces", pieces}};
}

std::vector<Vec> FunctionOracle::exact_ball_subdiff(std::span<const double> x,
                                                    double eps,
                                                    const NormSpec& norm) const {
  if (!exact_region_subdiff)
    throw UnsupportedError("oracle \"" + name + "\" has no exact subdifferential");
  return exact_region_subdiff(BallRegion{Vec(x.begin(), x.end()), eps, norm});
}

FunctionOracle make_abs1d() { return make_separable({0.0}, {1.0}, "abs1d"); }

FunctionOracle make_valley(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw InvalidInputError("valley: alpha must be positive");
  return make_separable({0.0, 0.0}, {1.0, alpha}, "valley");
}

FunctionOracle make_skewed_abs() {
  return make_separable({1.0, 0.0}, {0.0, 1.0}, "skewed_abs");
}

FunctionOracle make_weighted_abs(Vec weights) {
  Vec g0(weights.size(), 0.0);
  return make_separable(std::move(g0), std::move(weights), "weighted_abs");
}

FunctionOracle make_max_affine(MaxAffineSpec spec) {
  if (spec.dim == 0 || spec.pieces.empty())
    throw InvalidInputError("max_affine: needs dim >= 1 and >= 1 piece");
  for (const auto& piece : spec.pieces)
    if (piece.c.size() != spec.dim || !all_finite(piece.c) || !std::isfinite(piece.b))
      throw InvalidInputError("max_affine: malformed piece");
  auto shared = std::make_shared<MaxAffineSpec>(std::move(spec));
  FunctionOracle oracle;
  oracle.dim = shared->dim;
  oracle.name = "max_affine";
  oracle.eval = [shared](std::span<const double> x) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& piece : shared->pieces)
      best = std::max(best, dot(piece.c, x) + piece.b);
    return best;
  };
  oracle.grad_ae = [shared](std::span<const double> x) {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_k = 0;
    for (std::size_t k = 0; k < shared->pieces.size(); ++k) {
      double v = dot(shared->pieces[k].c, x) + shared->pieces[k].b;
      if (v > best) {
        best = v;
        best_k = k;
      }
    }
    return shared->pieces[best_k].c;
  };
  oracle.exact_region_subdiff = [shared, dim = oracle.dim](const Region& region) {
    region_validate(region, dim);
    return max_affine_region_subdiff(*shared, region);
  };
  auto subdiff = oracle.exact_region_subdiff;
  oracle.lipschitz_bound = [subdiff](std::span<const double> c, double r,
                                     const NormSpec& nrm) {
    return pwa_lipschitz(subdiff, c, r, nrm);
  };
  return oracle;
}

FunctionOracle make_half_max() {
  MaxAffineSpec spec;
  spec.dim = 2;
  spec.pieces = {{{1.0, 0.0}, 0.0}, {{0.0, 1.0}, 0.0}};
  FunctionOracle oracle = make_max_affine(std::move(spec));
  oracle.name = "half_max";
  return oracle;
}

FunctionOracle make_builtin(const std::string& name, const nlohmann::json& params) {
  if (name == "abs1d") return make_abs1d();
  if (name == "valley") {
    if (!params.contains("alpha") || !params.at("alpha").is_number())
      throw InvalidInputError("valley requires a numeric \"alpha\" parameter");
    return make_valley(params.at("alpha").get<double>());
  }
  if (name == "skewed_abs") return make_skewed_abs();
  if (name == "half_max") return make_half_max();
  if (name == "weighted_abs") {
    if (!params.contains("weights") || !params.at("weights").is_array())
      throw InvalidInputError("weighted_abs requires a \"weights\" array");
    return make_weighted_abs(params.at("weights").get<Vec>());
  }
  if (name == "max_affine") return make_max_affine(max_affine_from_json(params));
  throw InvalidInputError("unknown builtin function \"" + name + "\"");
}

}  // namespace setgrad
