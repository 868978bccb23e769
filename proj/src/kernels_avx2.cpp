/*
 * This code is part of the masqkd simulator.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "masqkd/kernels.hpp"

// AVX2 kernel variants. One __m256d holds two complex doubles. Each complex
// product is evaluated as mul/mul/addsub on exactly the operands the scalar
// reference uses, and row sums accumulate in the same left-to-right order,
// so outputs are bit-identical to kernels_scalar.cpp. This TU is compiled
// with -mavx2 (and -ffp-contract=off, like the rest of the project, so the
// compiler cannot fuse the mul/add pairs into FMAs); callers must gate on
// runtime CPU support via avx2_ops().

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>

namespace masqkd::kern {

namespace {

// (a.re + i a.im) * v for two packed complex values, with per-lane constants
// given as broadcast re/im vectors.
inline __m256d cmul_const(__m256d cre, __m256d cim, __m256d v) {
  const __m256d vswap = _mm256_permute_pd(v, 0x5);  // swap re<->im per lane
  return _mm256_addsub_pd(_mm256_mul_pd(cre, v), _mm256_mul_pd(cim, vswap));
}

void butterfly2_avx2(cplx* amps, std::size_t n, std::size_t stride,
                     const cplx* u) {
  double* p = reinterpret_cast<double*>(amps);
  if (stride == 1) {
    // Pairs are adjacent: [x, y] fits one register. Lane 0 evaluates
    // u00*x + u01*y, lane 1 evaluates u10*x + u11*y.
    const __m256d r0re = _mm256_set_pd(u[2].real(), u[2].real(), u[0].real(), u[0].real());
    const __m256d r0im = _mm256_set_pd(u[2].imag(), u[2].imag(), u[0].imag(), u[0].imag());
    const __m256d r1re = _mm256_set_pd(u[3].real(), u[3].real(), u[1].real(), u[1].real());
    const __m256d r1im = _mm256_set_pd(u[3].imag(), u[3].imag(), u[1].imag(), u[1].imag());
    for (std::size_t i = 0; i < n; i += 2) {
      const __m256d v = _mm256_loadu_pd(p + 2 * i);
      const __m256d xx = _mm256_permute2f128_pd(v, v, 0x00);
      const __m256d yy = _mm256_permute2f128_pd(v, v, 0x11);
      const __m256d out = _mm256_add_pd(cmul_const(r0re, r0im, xx),
                                        cmul_const(r1re, r1im, yy));
      _mm256_storeu_pd(p + 2 * i, out);
    }
    return;
  }
  // stride >= 2: vectorize across offsets, two at a time (strides here are
  // always powers of two, so stride is even).
  const __m256d u00im = _mm256_set1_pd(u[0].imag());
  const __m256d u01im = _mm256_set1_pd(u[1].imag());
  const __m256d u10im = _mm256_set1_pd(u[2].imag());
  const __m256d u11im = _mm256_set1_pd(u[3].imag());
  const __m256d c00re = _mm256_set1_pd(u[0].real());
  const __m256d c01re = _mm256_set1_pd(u[1].real());
  const __m256d c10re = _mm256_set1_pd(u[2].real());
  const __m256d c11re = _mm256_set1_pd(u[3].real());
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    for (std::size_t off = 0; off < stride; off += 2) {
      const std::size_t i = base + off;
      const std::size_t j = i + stride;
      const __m256d x = _mm256_loadu_pd(p + 2 * i);
      const __m256d y = _mm256_loadu_pd(p + 2 * j);
      const __m256d nx = _mm256_add_pd(cmul_const(c00re, u00im, x),
                                       cmul_const(c01re, u01im, y));
      const __m256d ny = _mm256_add_pd(cmul_const(c10re, u10im, x),
                                       cmul_const(c11re, u11im, y));
      _mm256_storeu_pd(p + 2 * i, nx);
      _mm256_storeu_pd(p + 2 * j, ny);
    }
  }
}

void butterfly4_avx2(cplx* amps, std::size_t n, std::size_t stride,
                     const cplx* u) {
  double* p = reinterpret_cast<double*>(amps);
  if (stride == 1) {
    // Four adjacent complex values per group; compute output rows in pairs
    // (0,1) and (2,3), each pair living in one register.
    for (std::size_t base = 0; base < n; base += 4) {
      const __m256d v01 = _mm256_loadu_pd(p + 2 * base);
      const __m256d v23 = _mm256_loadu_pd(p + 2 * base + 4);
      const __m256d x[4] = {
          _mm256_permute2f128_pd(v01, v01, 0x00),
          _mm256_permute2f128_pd(v01, v01, 0x11),
          _mm256_permute2f128_pd(v23, v23, 0x00),
          _mm256_permute2f128_pd(v23, v23, 0x11),
      };
      for (int pair = 0; pair < 2; ++pair) {
        const int r0 = 2 * pair, r1 = 2 * pair + 1;
        __m256d acc = _mm256_setzero_pd();
        for (int k = 0; k < 4; ++k) {
          const __m256d cre = _mm256_set_pd(u[4 * r1 + k].real(), u[4 * r1 + k].real(),
                                            u[4 * r0 + k].real(), u[4 * r0 + k].real());
          const __m256d cim = _mm256_set_pd(u[4 * r1 + k].imag(), u[4 * r1 + k].imag(),
                                            u[4 * r0 + k].imag(), u[4 * r0 + k].imag());
          acc = _mm256_add_pd(acc, cmul_const(cre, cim, x[k]));
        }
        _mm256_storeu_pd(p + 2 * base + 4 * pair, acc);
      }
    }
    return;
  }
  for (std::size_t base = 0; base < n; base += 4 * stride) {
    for (std::size_t off = 0; off < stride; off += 2) {
      __m256d x[4];
      for (int k = 0; k < 4; ++k) {
        x[k] = _mm256_loadu_pd(p + 2 * (base + off + k * stride));
      }
      for (int row = 0; row < 4; ++row) {
        __m256d acc = _mm256_setzero_pd();
        for (int k = 0; k < 4; ++k) {
          const __m256d cre = _mm256_set1_pd(u[4 * row + k].real());
          const __m256d cim = _mm256_set1_pd(u[4 * row + k].imag());
          acc = _mm256_add_pd(acc, cmul_const(cre, cim, x[k]));
        }
        _mm256_storeu_pd(p + 2 * (base + off + row * stride), acc);
      }
    }
  }
}

void kron_avx2(const cplx* a, std::size_t na, const cplx* b, std::size_t nb,
               cplx* out) {
  const double* pb = reinterpret_cast<const double*>(b);
  double* po = reinterpret_cast<double*>(out);
  for (std::size_t i = 0; i < na; ++i) {
    const __m256d cre = _mm256_set1_pd(a[i].real());
    const __m256d cim = _mm256_set1_pd(a[i].imag());
    std::size_t j = 0;
    for (; j + 2 <= nb; j += 2) {
      const __m256d v = _mm256_loadu_pd(pb + 2 * j);
      _mm256_storeu_pd(po + 2 * (i * nb + j), cmul_const(cre, cim, v));
    }
    for (; j < nb; ++j) {
      const double re = a[i].real() * b[j].real() - a[i].imag() * b[j].imag();
      const double im = a[i].real() * b[j].imag() + a[i].imag() * b[j].real();
      out[i * nb + j] = cplx(re, im);
    }
  }
}

void scale_avx2(cplx* x, std::size_t n, double s) {
  double* p = reinterpret_cast<double*>(x);
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    _mm256_storeu_pd(p + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(p + 2 * i), vs));
  }
  for (; i < n; ++i) {
    x[i] = cplx(x[i].real() * s, x[i].imag() * s);
  }
}

}  // namespace

const Ops* avx2_ops_impl() {
  static const Ops ops = {"avx2", butterfly2_avx2, butterfly4_avx2, kron_avx2,
                          scale_avx2};
  return &ops;
}

}  // namespace masqkd::kern

#else

namespace masqkd::kern {
const Ops* avx2_ops_impl() { return nullptr; }
}  // namespace masqkd::kern

#endif
