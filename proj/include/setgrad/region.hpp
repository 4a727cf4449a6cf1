#pragma once

#include <cstddef>
#include <span>
#include <variant>

#include "setgrad/norms.hpp"
#include "setgrad/rng.hpp"
#include "setgrad/vec.hpp"

namespace setgrad {

/// Closed norm ball around a center point.
struct BallRegion {
  Vec center;
  double radius = 0.0;
  NormSpec norm = NormSpec::euclidean();
};

/// Closed segment [a, b].
struct SegmentRegion {
  Vec a;
  Vec b;
};

/// Axis-aligned closed box [lo, hi].
struct BoxRegion {
  Vec lo;
  Vec hi;
};

using Region = std::variant<BallRegion, SegmentRegion, BoxRegion>;

std::size_t region_dim(const Region& region);

/// Closed membership test.
bool region_contains(const Region& region, std::span<const double> y);

/// Support function: max over y in the region of <c, y>.
double region_support(const Region& region, std::span<const double> c);

/// Center of the ball, midpoint of the segment, center of the box.
Vec region_center(const Region& region);

/// Uniform draw (rejection from the bounding box for balls).
Vec region_sample(const Region& region, Rng& rng);

/// Throws InvalidInputError unless the region is well-formed and matches dim.
void region_validate(const Region& region, std::size_t dim);

}  // namespace setgrad
