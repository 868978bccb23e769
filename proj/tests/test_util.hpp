/*
 * This code is part of the masqkd simulator.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef MASQKD_TESTS_TEST_UTIL_HPP_
#define MASQKD_TESTS_TEST_UTIL_HPP_

#include <array>
#include <cmath>
#include <vector>

#include "masqkd/attack.hpp"
#include "masqkd/quantum.hpp"
#include "masqkd/rng.hpp"

namespace masqkd::testutil {

inline double gaussian(RandomStream& rng) {
  const double u1 = std::max(rng.uniform(), 1e-300);
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline cplx cgaussian(RandomStream& rng) {
  return cplx(gaussian(rng), gaussian(rng));
}

template <std::size_t N>
std::array<cplx, N> cgaussian_vec(RandomStream& rng) {
  std::array<cplx, N> v;
  for (auto& c : v) c = cgaussian(rng);
  return v;
}

template <std::size_t N>
double vec_norm_sqr(const std::array<cplx, N>& v) {
  double s = 0.0;
  for (const cplx& c : v) s += std::norm(c);
  return s;
}

template <std::size_t N>
cplx vec_inner(const std::array<cplx, N>& a, const std::array<cplx, N>& b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s += std::conj(a[i]) * b[i];
  return s;
}

/// Haar-ish random qubit unitary from three angles.
inline Gate random_unitary2(RandomStream& rng) {
  const double theta = rng.uniform() * M_PI / 2.0;
  const double alpha = rng.uniform() * 2.0 * M_PI;
  const double beta = rng.uniform() * 2.0 * M_PI;
  const cplx c = std::cos(theta);
  const cplx s = std::sin(theta);
  const cplx ea = std::polar(1.0, alpha);
  const cplx eb = std::polar(1.0, beta);
  return Gate(2, {ea * c, eb * s, -std::conj(eb) * s, std::conj(ea) * c});
}

/// Random unitary of any small dimension via Gram-Schmidt on Gaussian
/// columns; the Gate constructor double-checks unitarity.
inline Gate random_unitary(int dim, RandomStream& rng) {
  if (dim == 2) return random_unitary2(rng);
  std::vector<std::vector<cplx>> cols(dim, std::vector<cplx>(dim));
  for (auto& col : cols) {
    for (auto& c : col) c = cgaussian(rng);
  }
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < i; ++j) {
      cplx overlap = 0.0;
      for (int k = 0; k < dim; ++k) overlap += std::conj(cols[j][k]) * cols[i][k];
      for (int k = 0; k < dim; ++k) cols[i][k] -= overlap * cols[j][k];
    }
    double n = 0.0;
    for (int k = 0; k < dim; ++k) n += std::norm(cols[i][k]);
    n = std::sqrt(n);
    for (int k = 0; k < dim; ++k) cols[i][k] /= n;
  }
  std::vector<cplx> m(dim * dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) m[r * dim + c] = cols[c][r];
  }
  return Gate(dim, std::move(m));
}

/// Random normalized pure state over the given subsystem dims.
inline StateVector random_state(std::vector<int> dims, RandomStream& rng) {
  std::size_t total = 1;
  for (int d : dims) total *= d;
  std::vector<cplx> amps(total);
  double n = 0.0;
  for (auto& a : amps) {
    a = cgaussian(rng);
    n += std::norm(a);
  }
  n = std::sqrt(n);
  for (auto& a : amps) a /= n;
  return StateVector(std::move(dims), std::move(amps));
}

/// Random Strategy-1 attack: any (u, w) with |u|^2 + |w|^2 = 1.
inline AttackModel random_s1(RandomStream& rng,
                             ChannelLeg leg = ChannelLeg::TPtoAlice) {
  auto u = cgaussian_vec<2>(rng);
  auto w = cgaussian_vec<2>(rng);
  const double n = std::sqrt(vec_norm_sqr(u) + vec_norm_sqr(w));
  for (auto& c : u) c /= n;
  for (auto& c : w) c /= n;
  AttackModel a;
  a.kind = AttackKind::CollectiveS1;
  a.location = leg;
  a.u = u;
  a.w = w;
  return a;
}

/// Random validated Strategy-2 attack: the two isometry columns are two
/// orthonormal Gaussian vectors in C^8, split into transit components.
inline AttackModel random_s2(RandomStream& rng,
                             ChannelLeg leg = ChannelLeg::AliceToBob) {
  auto c0 = cgaussian_vec<8>(rng);
  auto c1 = cgaussian_vec<8>(rng);
  double n0 = std::sqrt(vec_norm_sqr(c0));
  for (auto& c : c0) c /= n0;
  const cplx overlap = vec_inner(c0, c1);
  for (std::size_t i = 0; i < 8; ++i) c1[i] -= overlap * c0[i];
  double n1 = std::sqrt(vec_norm_sqr(c1));
  for (auto& c : c1) c /= n1;

  AttackModel a;
  a.kind = AttackKind::CollectiveS2;
  a.location = leg;
  for (int i = 0; i < 4; ++i) {
    a.v0[i] = c0[i];
    a.v1[i] = c0[i + 4];
    a.w0[i] = c1[i];
    a.w1[i] = c1[i + 4];
  }
  return a;
}

/// Random (v0, v1) pair satisfying the make_undetectable_s2 preconditions.
inline std::pair<std::array<cplx, 4>, std::array<cplx, 4>>
random_undetectable_inputs(RandomStream& rng) {
  auto v0 = cgaussian_vec<4>(rng);
  auto v1 = cgaussian_vec<4>(rng);
  const double c = vec_inner(v0, v1).real() / vec_norm_sqr(v0);
  for (std::size_t i = 0; i < 4; ++i) v1[i] -= c * v0[i];
  const double n = std::sqrt(vec_norm_sqr(v0) + vec_norm_sqr(v1));
  for (auto& x : v0) x /= n;
  for (auto& x : v1) x /= n;
  return {v0, v1};
}

/// 4-sigma binomial half-width around p over n trials.
inline double binom_4sigma(double p, double n) {
  return 4.0 * std::sqrt(p * (1.0 - p) / n);
}

}  // namespace masqkd::testutil

#endif  // MASQKD_TESTS_TEST_UTIL_HPP_
