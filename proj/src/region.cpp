#include "setgrad/region.hpp"

#include <cmath>

#include "setgrad/errors.hpp"

namespace setgrad {

std::size_t region_dim(const Region& region) {
  return std::visit(
      [](const auto& r) -> std::size_t {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, BallRegion>)
          return r.center.size();
        else if constexpr (std::is_same_v<T, SegmentRegion>)
          return r.a.size();
        else
          return r.lo.size();
      },
      region);
}

bool region_contains(const Region& region, std::span<const double> y) {
  if (y.size() != region_dim(region)) return false;
  if (const auto* ball = std::get_if<BallRegion>(&region)) {
    Vec diff(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) diff[i] = y[i] - ball->center[i];
    return norm_value(diff, ball->norm) <= ball->radius;
  }
  if (const auto* seg = std::get_if<SegmentRegion>(&region)) {
    // y = a + t (b - a) for a single t in [0, 1]
    double t = -1.0;
    bool t_set = false;
    for (std::size_t i = 0; i < y.size(); ++i) {
      double d = seg->b[i] - seg->a[i];
      if (d == 0.0) {
        if (y[i] != seg->a[i]) return false;
        continue;
      }
      double ti = (y[i] - seg->a[i]) / d;
      if (!t_set) {
        t = ti;
        t_set = true;
      } else if (std::fabs(ti - t) > 1e-12) {
        return false;
      }
    }
    if (!t_set) t = 0.0;
    return t >= -1e-12 && t <= 1.0 + 1e-12;
  }
  const auto& box = std::get<BoxRegion>(region);
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i] < box.lo[i] || y[i] > box.hi[i]) return false;
  return true;
}

double region_support(const Region& region, std::span<const double> c) {
  if (c.size() != region_dim(region))
    throw DimensionMismatchError("region_support: dimension mismatch");
  if (const auto* ball = std::get_if<BallRegion>(&region))
    return dot(c, ball->center) + ball->radius * dual_norm_value(c, ball->norm);
  if (const auto* seg = std::get_if<SegmentRegion>(&region))
    return std::max(dot(c, seg->a), dot(c, seg->b));
  const auto& box = std::get<BoxRegion>(region);
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    s += c[i] >= 0.0 ? c[i] * box.hi[i] : c[i] * box.lo[i];
  return s;
}

Vec region_center(const Region& region) {
  if (const auto* ball = std::get_if<BallRegion>(&region)) return ball->center;
  if (const auto* seg = std::get_if<SegmentRegion>(&region)) {
    Vec mid(seg->a.size());
    for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (seg->a[i] + seg->b[i]);
    return mid;
  }
  const auto& box = std::get<BoxRegion>(region);
  Vec mid(box.lo.size());
  for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (box.lo[i] + box.hi[i]);
  return mid;
}

Vec region_sample(const Region& region, Rng& rng) {
  if (const auto* ball = std::get_if<BallRegion>(&region)) {
    const std::size_t n = ball->center.size();
    if (ball->radius == 0.0) return ball->center;
    Vec y(n);
    // rejection from the bounding box; fine at the small dimensions this
    // library targets
    for (std::size_t attempt = 0; attempt < 1000000; ++attempt) {
      Vec diff(n);
      for (std::size_t i = 0; i < n; ++i)
        diff[i] = rng.uniform(-ball->radius, ball->radius);
      if (norm_value(diff, ball->norm) <= ball->radius) {
        for (std::size_t i = 0; i < n; ++i) y[i] = ball->center[i] + diff[i];
        return y;
      }
    }
    throw UnsupportedError("ball rejection sampling acceptance rate too low");
  }
  if (const auto* seg = std::get_if<SegmentRegion>(&region)) {
    double t = rng.uniform01();
    Vec y(seg->a.size());
    for (std::size_t i = 0; i < y.size(); ++i)
      y[i] = seg->a[i] + t * (seg->b[i] - seg->a[i]);
    return y;
  }
  const auto& box = std::get<BoxRegion>(region);
  Vec y(box.lo.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = rng.uniform(box.lo[i], box.hi[i]);
  return y;
}

void region_validate(const Region& region, std::size_t dim) {
  if (region_dim(region) != dim)
    throw DimensionMismatchError("region dimension does not match oracle");
  if (const auto* ball = std::get_if<BallRegion>(&region)) {
    if (!all_finite(ball->center) || !std::isfinite(ball->radius) || ball->radius < 0.0)
      throw InvalidInputError("ball region: center must be finite, radius >= 0");
    return;
  }
  if (const auto* seg = std::get_if<SegmentRegion>(&region)) {
    if (seg->a.size() != seg->b.size() || !all_finite(seg->a) || !all_finite(seg->b))
      throw InvalidInputError("segment region: endpoints must be finite, same dim");
    return;
  }
  const auto& box = std::get<BoxRegion>(region);
  if (box.lo.size() != box.hi.size() || !all_finite(box.lo) || !all_finite(box.hi))
    throw InvalidInputError("box region: bounds must be finite, same dim");
  for (std::size_t i = 0; i < box.lo.size(); ++i)
    if (box.lo[i] > box.hi[i]) throw InvalidInputError("box region: lo > hi");
}

}  // namespace setgrad
