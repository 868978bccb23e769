/*
 * This code is part of the masqkd simulator.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "masqkd/kernels.hpp"

// Reference kernels. Complex products are spelled out as explicit real
// arithmetic in a fixed order (re = ar*br - ai*bi, im = ar*bi + ai*br) so
// the SIMD variants can reproduce every rounding step exactly. Do not
// rewrite these loops with std::complex operator* — libstdc++ routes that
// through __muldc3, which has different semantics on non-finite inputs.

namespace masqkd::kern {

namespace {

inline void cmul(double ar, double ai, double br, double bi, double& re,
                 double& im) {
  re = ar * br - ai * bi;
  im = ar * bi + ai * br;
}

void butterfly2_scalar(cplx* amps, std::size_t n, std::size_t stride,
                       const cplx* u) {
  const double u00r = u[0].real(), u00i = u[0].imag();
  const double u01r = u[1].real(), u01i = u[1].imag();
  const double u10r = u[2].real(), u10i = u[2].imag();
  const double u11r = u[3].real(), u11i = u[3].imag();
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    for (std::size_t off = 0; off < stride; ++off) {
      const std::size_t i = base + off;
      const std::size_t j = i + stride;
      const double xr = amps[i].real(), xi = amps[i].imag();
      const double yr = amps[j].real(), yi = amps[j].imag();
      double p0r, p0i, p1r, p1i;
      cmul(u00r, u00i, xr, xi, p0r, p0i);
      cmul(u01r, u01i, yr, yi, p1r, p1i);
      const double nxr = p0r + p1r, nxi = p0i + p1i;
      cmul(u10r, u10i, xr, xi, p0r, p0i);
      cmul(u11r, u11i, yr, yi, p1r, p1i);
      const double nyr = p0r + p1r, nyi = p0i + p1i;
      amps[i] = cplx(nxr, nxi);
      amps[j] = cplx(nyr, nyi);
    }
  }
}

void butterfly4_scalar(cplx* amps, std::size_t n, std::size_t stride,
                       const cplx* u) {
  for (std::size_t base = 0; base < n; base += 4 * stride) {
    for (std::size_t off = 0; off < stride; ++off) {
      double xr[4], xi[4];
      for (int k = 0; k < 4; ++k) {
        const cplx a = amps[base + off + k * stride];
        xr[k] = a.real();
        xi[k] = a.imag();
      }
      for (int row = 0; row < 4; ++row) {
        // Accumulate left to right: ((p0 + p1) + p2) + p3.
        double accr = 0.0, acci = 0.0;
        for (int k = 0; k < 4; ++k) {
          double pr, pi;
          cmul(u[4 * row + k].real(), u[4 * row + k].imag(), xr[k], xi[k], pr,
               pi);
          accr += pr;
          acci += pi;
        }
        amps[base + off + row * stride] = cplx(accr, acci);
      }
    }
  }
}

void kron_scalar(const cplx* a, std::size_t na, const cplx* b, std::size_t nb,
                 cplx* out) {
  for (std::size_t i = 0; i < na; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    for (std::size_t j = 0; j < nb; ++j) {
      double re, im;
      cmul(ar, ai, b[j].real(), b[j].imag(), re, im);
      out[i * nb + j] = cplx(re, im);
    }
  }
}

void scale_scalar(cplx* x, std::size_t n, double s) {
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = cplx(x[i].real() * s, x[i].imag() * s);
  }
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops = {"scalar", butterfly2_scalar, butterfly4_scalar,
                          kron_scalar, scale_scalar};
  return ops;
}

double norm_sqr(const cplx* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  }
  return acc;
}

cplx inner(const cplx* a, const cplx* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // conj(a[i]) * b[i]
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return cplx(re, im);
}

}  // namespace masqkd::kern
