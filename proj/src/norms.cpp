#include "setgrad/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include "setgrad/errors.hpp"

namespace setgrad {

namespace {

void require_finite(std::span<const double> x) {
  if (!all_finite(x)) throw InvalidInputError("non-finite vector entry");
}

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::fabs(v));
  return m;
}

}  // namespace

NormSpec NormSpec::p(double exponent) {
  if (!(exponent > 1.0) || !std::isfinite(exponent))
    throw InvalidInputError("p-norm exponent must satisfy 1 < p < inf");
  return NormSpec(NormKind::p_norm, exponent);
}

NormSpec NormSpec::parse(std::string_view text) {
  if (text == "euclidean") return euclidean();
  if (text == "l1") return l1();
  if (text == "linf") return linf();
  if (text.size() > 2 && text.substr(0, 2) == "p:") {
    char* end = nullptr;
    std::string num(text.substr(2));
    double v = std::strtod(num.c_str(), &end);
    if (end == num.c_str() + num.size()) return p(v);
  }
  throw InvalidInputError("unknown norm \"" + std::string(text) +
                          "\" (expected euclidean, l1, linf or p:<exponent>)");
}

std::string NormSpec::to_string() const {
  switch (kind_) {
    case NormKind::euclidean:
      return "euclidean";
    case NormKind::l1:
      return "l1";
    case NormKind::linf:
      return "linf";
    case NormKind::p_norm: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "p:%.17g", p_);
      return buf;
    }
  }
  return "euclidean";
}

NormSpec NormSpec::dual() const {
  switch (kind_) {
    case NormKind::euclidean:
      return euclidean();
    case NormKind::l1:
      return linf();
    case NormKind::linf:
      return l1();
    case NormKind::p_norm:
      return p(p_ / (p_ - 1.0));
  }
  return euclidean();
}

double norm_value(std::span<const double> x, const NormSpec& spec) {
  require_finite(x);
  switch (spec.kind()) {
    case NormKind::euclidean: {
      double s = 0.0;
      for (double v : x) s += v * v;
      return std::sqrt(s);
    }
    case NormKind::l1: {
      double s = 0.0;
      for (double v : x) s += std::fabs(v);
      return s;
    }
    case NormKind::linf:
      return max_abs(x);
    case NormKind::p_norm: {
      // scale by the largest entry so the powers stay in range
      double m = max_abs(x);
      if (m == 0.0) return 0.0;
      double p = spec.exponent();
      double s = 0.0;
      for (double v : x) s += std::pow(std::fabs(v) / m, p);
      return m * std::pow(s, 1.0 / p);
    }
  }
  return 0.0;
}

double dual_norm_value(std::span<const double> a, const NormSpec& spec) {
  return norm_value(a, spec.dual());
}

Vec dual_map(std::span<const double> a, const NormSpec& spec) {
  require_finite(a);
  if (max_abs(a) == 0.0) throw ZeroVectorError("dual_map requires a != 0");
  if (!spec.strictly_convex())
    throw NonUniqueDualMapError(
        "dual mapping is set-valued for " + spec.to_string() + "; use dual_face");
  const std::size_t n = a.size();
  Vec j(n, 0.0);
  if (spec.kind() == NormKind::euclidean || spec.exponent() == 2.0) {
    double nrm = norm_value(a, NormSpec::euclidean());
    for (std::size_t i = 0; i < n; ++i) j[i] = a[i] / nrm;
    return j;
  }
  const double q = spec.dual().exponent();
  const double m = max_abs(a);
  double denom = 0.0;
  for (std::size_t i = 0; i < n; ++i) denom += std::pow(std::fabs(a[i]) / m, q);
  const double scale = std::pow(denom, (q - 1.0) / q);
  for (std::size_t i = 0; i < n; ++i)
    j[i] = sign_of(a[i]) * std::pow(std::fabs(a[i]) / m, q - 1.0) / scale;
  return j;
}

std::vector<Vec> dual_face(std::span<const double> a, const NormSpec& spec,
                           std::size_t dim_cap) {
  require_finite(a);
  const std::size_t n = a.size();
  if (max_abs(a) == 0.0) throw ZeroVectorError("dual_face requires a != 0");
  if (spec.kind() != NormKind::l1 && spec.kind() != NormKind::linf)
    throw InvalidInputError("dual_face is defined for l1 and linf only");
  if (n > dim_cap)
    throw FaceTooLargeError("dimension " + std::to_string(n) +
                            " exceeds the dual_face cap of " +
                            std::to_string(dim_cap));

  std::vector<Vec> verts;
  if (spec.kind() == NormKind::l1) {
    // unit ball vertices are +-e_i; the face keeps those hitting ||a||_inf
    const double m = max_abs(a);
    for (std::size_t i = 0; i < n; ++i) {
      if (std::fabs(a[i]) == m) {
        Vec v(n, 0.0);
        v[i] = sign_of(a[i]);
        verts.push_back(std::move(v));
      }
    }
  } else {
    std::vector<std::size_t> free_coords;
    for (std::size_t i = 0; i < n; ++i)
      if (a[i] == 0.0) free_coords.push_back(i);
    const std::size_t count = std::size_t{1} << free_coords.size();
    verts.reserve(count);
    for (std::size_t bits = 0; bits < count; ++bits) {
      Vec v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = sign_of(a[i]);
      for (std::size_t k = 0; k < free_coords.size(); ++k)
        v[free_coords[k]] = (bits >> k) & 1 ? 1.0 : -1.0;
      verts.push_back(std::move(v));
    }
  }
  return verts;
}

Vec norming_vector(std::span<const double> a, const NormSpec& spec) {
  require_finite(a);
  const std::size_t n = a.size();
  Vec u(n, 0.0);
  if (max_abs(a) == 0.0) return u;
  switch (spec.kind()) {
    case NormKind::euclidean:
    case NormKind::p_norm:
      return dual_map(a, spec);
    case NormKind::l1: {
      // dual norm is linf; first maximal coordinate
      double m = max_abs(a);
      for (std::size_t i = 0; i < n; ++i) {
        if (std::fabs(a[i]) == m) {
          u[i] = sign_of(a[i]);
          break;
        }
      }
      return u;
    }
    case NormKind::linf: {
      for (std::size_t i = 0; i < n; ++i) u[i] = sign_of(a[i]);
      return u;
    }
  }
  return u;
}

}  // namespace setgrad
