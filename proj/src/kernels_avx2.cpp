// AVX2 variants of the point-set scan kernels. Built with -mavx2
// -ffp-contract=off (see src/CMakeLists.txt); the contract-off flag matters
// because fusing the mul/add accumulation into FMA would break the bitwise
// equivalence with the scalar reference.

#include "setgrad/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

#include <cstdint>
#include <limits>

namespace setgrad::kernels {
namespace {

inline __m256d abs_pd(__m256d x) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

double max_dot_avx2(const double* soa, std::size_t n, std::size_t stride,
                    std::size_t dim, const double* h) {
  double best = -std::numeric_limits<double>::infinity();
  std::size_t j = 0;
  if (n >= 4) {
    __m256d vbest = _mm256_set1_pd(best);
    for (; j + 4 <= n; j += 4) {
      __m256d acc = _mm256_setzero_pd();
      for (std::size_t d = 0; d < dim; ++d) {
        __m256d p = _mm256_loadu_pd(soa + d * stride + j);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(p, _mm256_set1_pd(h[d])));
      }
      vbest = _mm256_max_pd(vbest, acc);
    }
    double lane[4];
    _mm256_storeu_pd(lane, vbest);
    for (int l = 0; l < 4; ++l)
      if (lane[l] > best) best = lane[l];
  }
  for (; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t d = 0; d < dim; ++d) acc += soa[d * stride + j] * h[d];
    if (acc > best) best = acc;
  }
  return best;
}

std::size_t argmin_dot_avx2(const double* soa, std::size_t n, std::size_t stride,
                            std::size_t dim, const double* h, double* value) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_j = 0;
  std::size_t j = 0;
  if (n >= 4) {
    __m256d vbest = _mm256_set1_pd(best);
    __m256i ibest = _mm256_setzero_si256();
    __m256i icur = _mm256_set_epi64x(3, 2, 1, 0);
    const __m256i four = _mm256_set1_epi64x(4);
    for (; j + 4 <= n; j += 4) {
      __m256d acc = _mm256_setzero_pd();
      for (std::size_t d = 0; d < dim; ++d) {
        __m256d p = _mm256_loadu_pd(soa + d * stride + j);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(p, _mm256_set1_pd(h[d])));
      }
      __m256d lt = _mm256_cmp_pd(acc, vbest, _CMP_LT_OQ);
      vbest = _mm256_blendv_pd(vbest, acc, lt);
      ibest = _mm256_blendv_epi8(ibest, icur, _mm256_castpd_si256(lt));
      icur = _mm256_add_epi64(icur, four);
    }
    double lane_v[4];
    std::int64_t lane_i[4];
    _mm256_storeu_pd(lane_v, vbest);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(lane_i), ibest);
    bool have = false;
    for (int l = 0; l < 4; ++l) {
      auto idx = static_cast<std::size_t>(lane_i[l]);
      if (!have || lane_v[l] < best || (lane_v[l] == best && idx < best_j)) {
        best = lane_v[l];
        best_j = idx;
        have = true;
      }
    }
  }
  for (; j < n; ++j) {
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

double min_sqdist_avx2(const double* soa, std::size_t n, std::size_t stride,
                       std::size_t dim, const double* z) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t j = 0;
  if (n >= 4) {
    __m256d vbest = _mm256_set1_pd(best);
    for (; j + 4 <= n; j += 4) {
      __m256d acc = _mm256_setzero_pd();
      for (std::size_t d = 0; d < dim; ++d) {
        __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(soa + d * stride + j),
                                     _mm256_set1_pd(z[d]));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
      }
      vbest = _mm256_min_pd(vbest, acc);
    }
    double lane[4];
    _mm256_storeu_pd(lane, vbest);
    for (int l = 0; l < 4; ++l)
      if (lane[l] < best) best = lane[l];
  }
  for (; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      double diff = soa[d * stride + j] - z[d];
      acc += diff * diff;
    }
    if (acc < best) best = acc;
  }
  return best;
}

double min_l1dist_avx2(const double* soa, std::size_t n, std::size_t stride,
                       std::size_t dim, const double* z) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t j = 0;
  if (n >= 4) {
    __m256d vbest = _mm256_set1_pd(best);
    for (; j + 4 <= n; j += 4) {
      __m256d acc = _mm256_setzero_pd();
      for (std::size_t d = 0; d < dim; ++d) {
        __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(soa + d * stride + j),
                                     _mm256_set1_pd(z[d]));
        acc = _mm256_add_pd(acc, abs_pd(diff));
      }
      vbest = _mm256_min_pd(vbest, acc);
    }
    double lane[4];
    _mm256_storeu_pd(lane, vbest);
    for (int l = 0; l < 4; ++l)
      if (lane[l] < best) best = lane[l];
  }
  for (; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      double diff = soa[d * stride + j] - z[d];
      acc += diff < 0.0 ? -diff : diff;
    }
    if (acc < best) best = acc;
  }
  return best;
}

double min_linfdist_avx2(const double* soa, std::size_t n, std::size_t stride,
                         std::size_t dim, const double* z) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t j = 0;
  if (n >= 4) {
    __m256d vbest = _mm256_set1_pd(best);
    for (; j + 4 <= n; j += 4) {
      __m256d acc = _mm256_setzero_pd();
      for (std::size_t d = 0; d < dim; ++d) {
        __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(soa + d * stride + j),
                                     _mm256_set1_pd(z[d]));
        acc = _mm256_max_pd(acc, abs_pd(diff));
      }
      vbest = _mm256_min_pd(vbest, acc);
    }
    double lane[4];
    _mm256_storeu_pd(lane, vbest);
    for (int l = 0; l < 4; ++l)
      if (lane[l] < best) best = lane[l];
  }
  for (; j < n; ++j) {
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

const Ops avx2_table = {
    "avx2",           max_dot_avx2,    argmin_dot_avx2,
    min_sqdist_avx2,  min_l1dist_avx2, min_linfdist_avx2,
};

}  // namespace

namespace detail {
const Ops* avx2_ops() { return &avx2_table; }
}  // namespace detail

}  // namespace setgrad::kernels

#else  // !__AVX2__

namespace setgrad::kernels::detail {
const Ops* avx2_ops() { return nullptr; }
}  // namespace setgrad::kernels::detail

#endif
