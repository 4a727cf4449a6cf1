#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "setgrad/hull.hpp"
#include "setgrad/minnorm.hpp"
#include "setgrad/norms.hpp"
#include "setgrad/oracles.hpp"
#include "setgrad/vec.hpp"

namespace setgrad {

/// Per-iteration certificate: the minimal-norm element a_min of the hull,
/// the optimal descent direction when ||a_min|| exceeds the stationarity
/// threshold, the support value along it, and the stability radius
/// ||a_min||/L within which every unit perturbation of the direction still
/// descends (NaN when no Lipschitz bound was supplied).
struct DescentCertificate {
  Vec a_min;
  double a_min_norm = 0.0;
  std::optional<Vec> direction;
  double directional_value = 0.0;  // support_value(hull, direction)
  double stability_radius = 0.0;
  double pairing_residual = 0.0;  // |<a_min, h> + ||a_min|||
  NormSpec norm = NormSpec::euclidean();
};

/// Computes the certificate for a hull. Strictly convex norms take the
/// negated dual map of a_min. For l1/linf the pairing condition alone does
/// not select a descent direction (face elements can point uphill), so the
/// negated face vertices plus the face centroid are scored by their support
/// value and the smallest wins.
DescentCertificate descent_direction(const HullSet& hull, const NormSpec& spec,
                                     double sigma,
                                     std::optional<double> lipschitz = std::nullopt);

/// True iff ||h - direction|| < ||a_min||/L under the certificate's norm.
/// For exact hulls a true result guarantees support_value(hull, h) < 0.
bool stability_check(std::span<const double> h, const DescentCertificate& cert,
                     double lipschitz);

/// Empirical sweep for near-minimal hull elements a' with
/// ||a'|| <= ||a_min|| + tau: reports the support-value range of the
/// directions -j(a') and how many fail support < -delta * ||a_min||.
/// A small enough violation-free tau always exists; this locates it.
struct ApproxQualityReport {
  std::size_t trials_requested = 0;
  std::size_t trials_done = 0;
  double tau = 0.0;
  double delta = 0.0;
  double min_support = 0.0;
  double max_support = 0.0;
  std::size_t violations = 0;
  double violation_fraction = 0.0;
};

ApproxQualityReport approx_direction_quality(const HullSet& hull,
                                             const NormSpec& spec, double tau,
                                             double delta, std::size_t trials,
                                             std::uint64_t seed);

/// Backtracking line search: starts at t = eps (the largest step keeping
/// the segment inside the ball for a unit direction) and halves until
/// f(x + t h) <= f(x) + c t fAh. Returns 0 after 40 halvings — the
/// sampled hull under-approximated the region, not an error.
double line_search(const FunctionOracle& oracle, std::span<const double> x,
                   std::span<const double> h, double fAh, double eps,
                   double armijo_c);

enum class RunStatus { ApproximatelyStationary, IterationLimit };
enum class StepStatus { step, shrink, stationary, iter_limit };

std::string step_status_name(StepStatus s);
StepStatus step_status_from_name(const std::string& name);

struct TrajectoryRecord {
  std::size_t iter = 0;
  Vec x;
  double f = 0.0;
  double eps = 0.0;
  double a_min_norm = 0.0;
  std::optional<Vec> direction;
  double step = 0.0;
  std::size_t samples = 0;  // hull size used this iteration
  StepStatus status = StepStatus::step;
  double wall_time_sec = 0.0;  // in-memory only, not serialized
};

struct Trajectory {
  std::size_t dim = 0;
  std::vector<TrajectoryRecord> records;  // last record is terminal
  RunStatus status = RunStatus::IterationLimit;
  Vec final_x;
  double final_f = 0.0;
};

struct DescentConfig {
  double eps0 = 0.5;
  double shrink = 0.5;     // ball shrink factor in (0,1)
  double sigma = 1e-6;     // stationarity threshold on ||a_min||
  double eps_min = 1e-3;   // stop shrinking below this radius
  std::size_t samples = 256;
  double armijo_c = 0.5;   // 1.0 is admissible for exact hulls
  std::size_t max_iter = 10000;
  std::uint64_t seed = 0;
  NormSpec norm = NormSpec::euclidean();
  bool prefer_exact = true;  // use the oracle's exact hull when available
  unsigned workers = 1;

  void validate() const;  // throws InvalidInputError
};

using RecordSink = std::function<void(const TrajectoryRecord&)>;

/// The shrinking-ball descent loop. Each iteration builds the gradient hull
/// on the ball B(x, eps), asks for a certificate, and either
///   - declares approximate stationarity once ||a_min|| <= sigma with
///     eps <= eps_min (shrinking eps otherwise), or
///   - line-searches along the certified direction; an accepted step moves
///     x and resets eps to eps0, a rejected one (t = 0) shrinks eps since
///     the sampled hull evidently missed nearby kinks.
/// f strictly decreases across accepted steps. A sink, when given, receives
/// each record as it is appended (the CLI streams the trace through it).
Trajectory run_descent(const FunctionOracle& oracle, Vec x0,
                       const DescentConfig& config,
                       const RecordSink& sink = nullptr);

/// Baseline comparator: x <- x - step * grad_ae(x)/||grad_ae(x)||_2 for a
/// fixed number of iterations; oscillates across kinks where the set
/// method does not.
Trajectory naive_subgradient_run(const FunctionOracle& oracle, Vec x0,
                                 double step, std::size_t iterations,
                                 const RecordSink& sink = nullptr);

/// Max over coordinates of the number of strict sign changes along the
/// recorded iterates; the oscillation measure reported by the CLI.
std::size_t sign_alternations(const Trajectory& trajectory);

}  // namespace setgrad
