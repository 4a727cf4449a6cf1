#pragma once

#include <cstddef>

namespace setgrad::kernels {

// Point-set scan kernels over column-major (structure-of-arrays) data:
// component d of point j lives at soa[d * stride + j]. These are the hot
// loops behind support values, Wolfe's linear-minimization step and
// Hausdorff distances.
//
// Contract: every variant must produce bit-identical results to the scalar
// reference. Per-point accumulation runs over components in ascending order
// with plain mul/add (no FMA), reductions across points use max/min only,
// and argmin breaks ties toward the smallest index. Inputs must be finite.
// Equivalence is enforced by tests/test_kernels.cpp.
struct Ops {
  const char* name;

  // max over j of <p_j, h>
  double (*max_dot)(const double* soa, std::size_t n, std::size_t stride,
                    std::size_t dim, const double* h);

  // first index attaining min over j of <p_j, h>; value written to *value
  std::size_t (*argmin_dot)(const double* soa, std::size_t n, std::size_t stride,
                            std::size_t dim, const double* h, double* value);

  // min over j of sum_d (p_j[d] - z[d])^2
  double (*min_sqdist)(const double* soa, std::size_t n, std::size_t stride,
                       std::size_t dim, const double* z);

  // min over j of sum_d |p_j[d] - z[d]|
  double (*min_l1dist)(const double* soa, std::size_t n, std::size_t stride,
                       std::size_t dim, const double* z);

  // min over j of max_d |p_j[d] - z[d]|
  double (*min_linfdist)(const double* soa, std::size_t n, std::size_t stride,
                         std::size_t dim, const double* z);
};

const Ops& scalar();

/// AVX2 variants, or nullptr when the build or the CPU lacks them.
const Ops* avx2();

/// Runtime-selected implementation. SETGRAD_KERNELS=scalar|avx2 in the
/// environment overrides the automatic choice (read once).
const Ops& active();

}  // namespace setgrad::kernels
