#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "setgrad/vec.hpp"

namespace setgrad {

enum class NormKind { euclidean, p_norm, l1, linf };

/// Which norm equips the primal space R^n. The dual space carries dual()
/// implicitly: the conjugate exponent q with 1/p + 1/q = 1, and
/// l1 <-> linf.
class NormSpec {
 public:
  static NormSpec euclidean() { return NormSpec(NormKind::euclidean, 2.0); }
  static NormSpec p(double exponent);  // requires 1 < exponent < inf
  static NormSpec l1() { return NormSpec(NormKind::l1, 1.0); }
  static NormSpec linf() { return NormSpec(NormKind::linf, 0.0); }

  /// Accepts "euclidean", "l1", "linf", "p:<exponent>".
  static NormSpec parse(std::string_view text);
  std::string to_string() const;

  NormKind kind() const { return kind_; }
  /// Exponent for euclidean (2) and p_norm; meaningless for l1/linf.
  double exponent() const { return p_; }
  bool strictly_convex() const {
    return kind_ == NormKind::euclidean || kind_ == NormKind::p_norm;
  }
  NormSpec dual() const;

  bool operator==(const NormSpec& other) const {
    return kind_ == other.kind_ && p_ == other.p_;
  }

 private:
  NormSpec(NormKind kind, double p) : kind_(kind), p_(p) {}
  NormKind kind_;
  double p_;
};

/// ||x|| under spec. Zero iff x = 0. Throws InvalidInputError on
/// non-finite entries.
double norm_value(std::span<const double> x, const NormSpec& spec);

/// ||a|| under spec.dual(), i.e. max of <a,h> over the spec unit ball.
double dual_norm_value(std::span<const double> a, const NormSpec& spec);

/// The dual mapping j: for nonzero a and strictly convex spec, the unique
/// unit vector with <a, j(a)> = dual_norm_value(a, spec). For the conjugate
/// exponent q: j(a)_i = sign(a_i) |a_i|^(q-1) / ||a||_q^(q-1).
/// Throws ZeroVectorError for a = 0 and NonUniqueDualMapError for l1/linf
/// (an arbitrary face vertex can point uphill; callers that own support
/// values must select via dual_face instead).
Vec dual_map(std::span<const double> a, const NormSpec& spec);

/// Vertex set of argmax_{||h||_spec <= 1} <a,h> for the polyhedral norms.
/// l1: sign(a_i) e_i over coordinates with |a_i| = ||a||_inf.
/// linf: h_i = sign(a_i) where a_i != 0, h_i in {-1,+1} free where a_i = 0.
/// Faces grow exponentially with dimension, hence the cap (FaceTooLargeError).
std::vector<Vec> dual_face(std::span<const double> a, const NormSpec& spec,
                           std::size_t dim_cap = 16);

/// Deterministic norming vector: u with ||u||_spec <= 1 and
/// <a, u> = dual_norm_value(a, spec). Coincides with dual_map for strictly
/// convex specs; for l1/linf picks a fixed face element (first maximal
/// coordinate, componentwise sign). Returns 0 for a = 0. Solver plumbing,
/// not a descent-direction selector.
Vec norming_vector(std::span<const double> a, const NormSpec& spec);

}  // namespace setgrad
