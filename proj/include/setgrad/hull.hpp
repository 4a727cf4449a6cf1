#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <json.hpp>

#include "setgrad/norms.hpp"
#include "setgrad/oracles.hpp"
#include "setgrad/region.hpp"
#include "setgrad/vec.hpp"

namespace setgrad {

struct Provenance {
  enum class Kind { exact, sampled };
  Kind kind = Kind::exact;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Finite set of dual vectors whose convex hull represents the gradient of
/// f on a region, either exactly or as a sampled inner approximation.
/// Points are deduplicated on construction (max-abs difference <= 1e-14,
/// first occurrence kept) and mirrored into a column-major block for the
/// scan kernels.
class HullSet {
 public:
  HullSet(std::vector<Vec> points, Provenance provenance);

  static HullSet exact(std::vector<Vec> points) {
    return HullSet(std::move(points), Provenance{});
  }

  std::size_t size() const { return size_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> point(std::size_t i) const {
    return {rows_.data() + i * dim_, dim_};
  }
  std::vector<Vec> points() const;
  const Provenance& provenance() const { return provenance_; }

  const double* soa() const { return soa_.data(); }
  std::size_t soa_stride() const { return size_; }

  static constexpr double kDedupTol = 1e-14;

 private:
  std::size_t dim_ = 0;
  std::size_t size_ = 0;
  std::vector<double> rows_;  // row-major size_ x dim_
  std::vector<double> soa_;   // column-major dim_ x size_
  Provenance provenance_;
};

/// Gradients of f at m uniform draws from the region plus the gradient at
/// the region center. Deterministic for a given seed: sample i uses the
/// substream mix_seed(seed, i), so splitting the index range over workers
/// cannot change the result.
HullSet sample_ball_gradients(const FunctionOracle& oracle, const Region& region,
                              std::size_t m, std::uint64_t seed,
                              unsigned workers = 1);

/// max over hull points of <a, h>. Equals the directional derivative of f
/// on the region when the hull is exact, a lower estimate when sampled.
double support_value(const HullSet& hull, std::span<const double> h);

/// Monte-Carlo difference-quotient estimate of the directional derivative
/// of f on the region: max over sampled y in A, z near y and a log-spaced
/// step grid of (f(z + t h) - f(z))/t. One-sided cross-check only; it
/// approaches the true value from below as probes increase and never
/// replaces the hull-based support value.
double directional_derivative_fd_upper(const FunctionOracle& oracle,
                                       const Region& region,
                                       std::span<const double> h,
                                       std::size_t probes, std::uint64_t seed);

/// max of the two one-sided excesses between finite point sets.
double hausdorff_distance(const std::vector<Vec>& P, const std::vector<Vec>& Q,
                          const NormSpec& norm);

/// Deduplicated union; support_value(merge(...), h) is the max of the parts.
HullSet merge(std::span<const HullSet> hulls);

// one point per row, 17 significant digits
void save_hull_csv(const HullSet& hull, std::ostream& os);
HullSet load_hull_csv(std::istream& is);

nlohmann::json hull_to_json(const HullSet& hull);
HullSet hull_from_json(const nlohmann::json& j);

}  // namespace setgrad
