/*
 * This code is part of the masqkd simulator.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef MASQKD_KERNELS_HPP_
#define MASQKD_KERNELS_HPP_

#include <complex>
#include <cstddef>

namespace masqkd::kern {

using cplx = std::complex<double>;

//============================================================================
// Data-parallel statevector kernels.
//
// Two implementations of the same table exist: a scalar reference and an
// AVX2 variant, selected at runtime (cpuid + MASQKD_KERNELS env override).
// Both evaluate every complex operation with the same sequence of IEEE
// mul/add/sub (no FMA contraction), so their outputs are bit-identical;
// the equivalence tests assert exact equality. Reductions (norms, inner
// products) are deliberately kept as single ordered scalar loops so that
// measurement probabilities do not depend on the selected backend.
//============================================================================

struct Ops {
  const char* name;

  // In-place 2x2 unitary on one subsystem axis. amps has n elements, n a
  // multiple of 2*stride; pairs are (base+off, base+off+stride) for
  // base in {0, 2*stride, ...}, off in [0, stride). u is row-major 2x2.
  void (*butterfly2)(cplx* amps, std::size_t n, std::size_t stride,
                     const cplx* u);

  // Same for a 4-dimensional subsystem axis; u is row-major 4x4 and the
  // four strided elements per group are (base+off+k*stride), k in 0..3.
  void (*butterfly4)(cplx* amps, std::size_t n, std::size_t stride,
                     const cplx* u);

  // out[i*nb + j] = a[i] * b[j]
  void (*kron)(const cplx* a, std::size_t na, const cplx* b, std::size_t nb,
               cplx* out);

  // x[i] *= s
  void (*scale)(cplx* x, std::size_t n, double s);
};

/// Scalar reference table; always available.
const Ops& scalar_ops();

/// AVX2 table, or nullptr when the binary or the CPU lacks AVX2 support.
const Ops* avx2_ops();

/// The runtime-selected table. Honors MASQKD_KERNELS=scalar|avx2|auto
/// (default auto); throws if avx2 is requested but unavailable.
const Ops& active();

/// Ordered reductions, backend-independent by construction.
double norm_sqr(const cplx* x, std::size_t n);
cplx inner(const cplx* a, const cplx* b, std::size_t n);

}  // namespace masqkd::kern

#endif  // MASQKD_KERNELS_HPP_
