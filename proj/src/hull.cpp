#include "setgrad/hull.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "setgrad/errors.hpp"
#include "setgrad/kernels.hpp"

namespace setgrad {

HullSet::HullSet(std::vector<Vec> points, Provenance provenance)
    : provenance_(provenance) {
  if (points.empty()) throw InvalidInputError("hull must contain at least one point");
  dim_ = points[0].size();
  if (dim_ == 0) throw InvalidInputError("hull points must have dimension >= 1");
  std::vector<const Vec*> unique;
  unique.reserve(points.size());
  for (const auto& p : points) {
    if (p.size() != dim_) throw DimensionMismatchError("hull points differ in dimension");
    if (!all_finite(p)) throw InvalidInputError("hull point has non-finite entry");
    bool dup = false;
    for (const Vec* u : unique)
      if (linf_diff(*u, p) <= kDedupTol) {
        dup = true;
        break;
      }
    if (!dup) unique.push_back(&p);
  }
  size_ = unique.size();
  rows_.resize(size_ * dim_);
  soa_.resize(size_ * dim_);
  for (std::size_t i = 0; i < size_; ++i)
    for (std::size_t d = 0; d < dim_; ++d) {
      rows_[i * dim_ + d] = (*unique[i])[d];
      soa_[d * size_ + i] = (*unique[i])[d];
    }
}

std::vector<Vec> HullSet::points() const {
  std::vector<Vec> out(size_);
  for (std::size_t i = 0; i < size_; ++i) {
    auto p = point(i);
    out[i].assign(p.begin(), p.end());
  }
  return out;
}

HullSet sample_ball_gradients(const FunctionOracle& oracle, const Region& region,
                              std::size_t m, std::uint64_t seed, unsigned workers) {
  if (m < 1) throw InvalidInputError("sample count must be >= 1");
  if (!oracle.grad_ae) throw UnsupportedError("oracle provides no grad_ae");
  region_validate(region, oracle.dim);

  std::vector<Vec> grads(m + 1);
  grads[0] = oracle.grad_ae(region_center(region));

  auto fill = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng(mix_seed(seed, i));
      Vec y = region_sample(region, rng);
      grads[i] = oracle.grad_ae(y);
    }
  };

  if (workers <= 1 || m < 2 * workers) {
    fill(1, m + 1);
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (m + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      std::size_t begin = 1 + w * chunk;
      std::size_t end = std::min(m + 1, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(fill, begin, end);
    }
    for (auto& t : pool) t.join();
  }

  return HullSet(std::move(grads),
                 Provenance{Provenance::Kind::sampled, m, seed});
}

double support_value(const HullSet& hull, std::span<const double> h) {
  if (h.size() != hull.dim())
    throw DimensionMismatchError("support_value: direction dimension mismatch");
  if (!all_finite(h)) throw InvalidInputError("support_value: non-finite direction");
  return kernels::active().max_dot(hull.soa(), hull.size(), hull.soa_stride(),
                                   hull.dim(), h.data());
}

double directional_derivative_fd_upper(const FunctionOracle& oracle,
                                       const Region& region,
                                       std::span<const double> h,
                                       std::size_t probes, std::uint64_t seed) {
  if (probes < 1) throw InvalidInputError("probe count must be >= 1");
  region_validate(region, oracle.dim);
  if (h.size() != oracle.dim)
    throw DimensionMismatchError("direction dimension mismatch");
  const std::size_t n = oracle.dim;
  static constexpr double kSteps[] = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
  double best = -std::numeric_limits<double>::infinity();
  Rng rng(mix_seed(seed, 0xfd));
  Vec z(n), zt(n);
  for (std::size_t probe = 0; probe < probes; ++probe) {
    Vec y = region_sample(region, rng);
    for (double t : kSteps) {
      for (int rep = 0; rep < 3; ++rep) {
        if (rep == 0) {
          z = y;
        } else {
          // jitter z around y at a scale well below t
          for (std::size_t i = 0; i < n; ++i) z[i] = y[i] + 0.05 * t * rng.gaussian();
        }
        for (std::size_t i = 0; i < n; ++i) zt[i] = z[i] + t * h[i];
        double q = (oracle.eval(zt) - oracle.eval(z)) / t;
        if (q > best) best = q;
      }
    }
  }
  return best;
}

namespace {

double one_sided_excess(const std::vector<Vec>& P, const double* q_soa,
                        std::size_t qn, std::size_t dim, const NormSpec& norm) {
  const auto& ops = kernels::active();
  double worst = 0.0;
  for (const auto& p : P) {
    double d;
    switch (norm.kind()) {
      case NormKind::euclidean:
        d = std::sqrt(ops.min_sqdist(q_soa, qn, qn, dim, p.data()));
        break;
      case NormKind::l1:
        d = ops.min_l1dist(q_soa, qn, qn, dim, p.data());
        break;
      case NormKind::linf:
        d = ops.min_linfdist(q_soa, qn, qn, dim, p.data());
        break;
      case NormKind::p_norm: {
        d = std::numeric_limits<double>::infinity();
        Vec diff(dim);
        for (std::size_t j = 0; j < qn; ++j) {
          for (std::size_t k = 0; k < dim; ++k) diff[k] = p[k] - q_soa[k * qn + j];
          d = std::min(d, norm_value(diff, norm));
        }
        break;
      }
    }
    worst = std::max(worst, d);
  }
  return worst;
}

std::vector<double> flatten_soa(const std::vector<Vec>& pts, std::size_t dim) {
  std::vector<double> soa(pts.size() * dim);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t d = 0; d < dim; ++d) soa[d * pts.size() + i] = pts[i][d];
  return soa;
}

}  // namespace

double hausdorff_distance(const std::vector<Vec>& P, const std::vector<Vec>& Q,
                          const NormSpec& norm) {
  if (P.empty() || Q.empty())
    throw InvalidInputError("hausdorff_distance: point sets must be nonempty");
  const std::size_t dim = P[0].size();
  for (const auto& p : P)
    if (p.size() != dim || !all_finite(p))
      throw InvalidInputError("hausdorff_distance: malformed point");
  for (const auto& q : Q)
    if (q.size() != dim || !all_finite(q))
      throw InvalidInputError("hausdorff_distance: malformed point");
  auto p_soa = flatten_soa(P, dim);
  auto q_soa = flatten_soa(Q, dim);
  return std::max(one_sided_excess(P, q_soa.data(), Q.size(), dim, norm),
                  one_sided_excess(Q, p_soa.data(), P.size(), dim, norm));
}

HullSet merge(std::span<const HullSet> hulls) {
  if (hulls.empty()) throw InvalidInputError("merge: empty hull list");
  std::vector<Vec> pts;
  Provenance prov{};
  bool all_exact = true;
  for (const auto& hull : hulls) {
    if (hull.dim() != hulls[0].dim())
      throw DimensionMismatchError("merge: hull dimensions differ");
    auto p = hull.points();
    pts.insert(pts.end(), p.begin(), p.end());
    if (hull.provenance().kind == Provenance::Kind::sampled) {
      all_exact = false;
      prov.samples += hull.provenance().samples;
      if (prov.seed == 0) prov.seed = hull.provenance().seed;
    }
  }
  prov.kind = all_exact ? Provenance::Kind::exact : Provenance::Kind::sampled;
  return HullSet(std::move(pts), prov);
}

void save_hull_csv(const HullSet& hull, std::ostream& os) {
  char buf[40];
  for (std::size_t i = 0; i < hull.size(); ++i) {
    auto p = hull.point(i);
    for (std::size_t d = 0; d < hull.dim(); ++d) {
      std::snprintf(buf, sizeof buf, "%.17g", p[d]);
      os << (d ? "," : "") << buf;
    }
    os << "\n";
  }
}

HullSet load_hull_csv(std::istream& is) {
  std::vector<Vec> pts;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    Vec p;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) p.push_back(std::stod(cell));
    pts.push_back(std::move(p));
  }
  return HullSet::exact(std::move(pts));
}

nlohmann::json hull_to_json(const HullSet& hull) {
  nlohmann::json prov;
  if (hull.provenance().kind == Provenance::Kind::exact) {
    prov = {{"kind", "exact"}};
  } else {
    prov = {{"kind", "sampled"},
            {"m", hull.provenance().samples},
            {"seed", hull.provenance().seed}};
  }
  return {{"points", hull.points()}, {"provenance", prov}};
}

HullSet hull_from_json(const nlohmann::json& j) {
  auto pts = j.at("points").get<std::vector<Vec>>();
  Provenance prov{};
  if (j.contains("provenance")) {
    const auto& pj = j.at("provenance");
    if (pj.value("kind", "exact") == std::string("sampled")) {
      prov.kind = Provenance::Kind::sampled;
      prov.samples = pj.value("m", std::uint64_t{0});
      prov.seed = pj.value("seed", std::uint64_t{0});
    }
  }
  return HullSet(std::move(pts), prov);
}

}  // namespace setgrad
