#include "setgrad/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <limits>

namespace setgrad::kernels {

namespace {

double max_dot_scalar(const double* soa, std::size_t n, std::size_t stride,
                      std::size_t dim, const double* h) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t d = 0; d < dim; ++d) acc += soa[d * stride + j] * h[d];
    if (acc > best) best = acc;
  }
  return best;
}

std::size_t argmin_dot_scalar(const double* soa, std::size_t n, std::size_t stride,
                              std::size_t dim, const double* h, double* value) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_j = 0;
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t d = 0; d < dim; ++d) acc += soa[d * stride + j] * h[d];
    if (acc < best) {
      best = acc;
      best_j = j;
    }
  }
  if (value) *value = best;
  return best_j;
}

double min_sqdist_scalar(const double* soa, std::size_t n, std::size_t stride,
                         std::size_t dim, const double* z) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      double diff = soa[d * stride + j] - z[d];
      acc += diff * diff;
    }
    if (acc < best) best = acc;
  }
  return best;
}

double min_l1dist_scalar(const double* soa, std::size_t n, std::size_t stride,
                         std::size_t dim, const double* z) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      double diff = soa[d * stride + j] - z[d];
      acc += diff < 0.0 ? -diff : diff;
    }
    if (acc < best) best = acc;
  }
  return best;
}

double min_linfdist_scalar(const double* soa, std::size_t n, std::size_t stride,
                           std::size_t dim, const double* z) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      double diff = soa[d * stride + j] - z[d];
      if (diff < 0.0) diff = -diff;
      if (diff > acc) acc = diff;
    }
    if (acc < best) best = acc;
  }
  return best;
}

const Ops scalar_ops = {
    "scalar",           max_dot_scalar,    argmin_dot_scalar,
    min_sqdist_scalar,  min_l1dist_scalar, min_linfdist_scalar,
};

}  // namespace

const Ops& scalar() { return scalar_ops; }

namespace detail {
// Defined in kernels_avx2.cpp; returns nullptr when that TU was built
// without AVX2 support.
const Ops* avx2_ops();
}  // namespace detail

const Ops* avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  if (!__builtin_cpu_supports("avx2")) return nullptr;
  return detail::avx2_ops();
#else
  return nullptr;
#endif
}

const Ops& active() {
  static const Ops& chosen = []() -> const Ops& {
    if (const char* env = std::getenv("SETGRAD_KERNELS")) {
      if (std::strcmp(env, "scalar") == 0) return scalar();
      if (std::strcmp(env, "avx2") == 0) {
        if (const Ops* ops = avx2()) return *ops;
        return scalar();
      }
    }
    if (const Ops* ops = avx2()) return *ops;
    return scalar();
  }();
  return chosen;
}

}  // namespace setgrad::kernels
