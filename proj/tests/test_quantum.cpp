/*
 * This code is part of the masqkd simulator.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "masqkd/quantum.hpp"
#include "masqkd/rng.hpp"
#include "test_util.hpp"

using namespace masqkd;

namespace {

const double kHalfSqrt2 = std::sqrt(0.5);

bool close(cplx a, cplx b, double tol = 1e-12) {
  return std::abs(a - b) <= tol;
}

bool state_close(const StateVector& s, const std::vector<cplx>& amps,
                 double tol = 1e-12) {
  if (s.amps().size() != amps.size()) return false;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (!close(s.amps()[i], amps[i], tol)) return false;
  }
  return true;
}

// Conjugation U rho U† on raw matrices, kept independent of the library's
// gate plumbing.
std::vector<cplx> conjugate(const std::vector<cplx>& rho, int d,
                            const std::vector<cplx>& u) {
  std::vector<cplx> tmp(d * d, 0.0), out(d * d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        tmp[i * d + j] += u[i * d + k] * rho[k * d + j];
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        out[i * d + j] += tmp[i * d + k] * std::conj(u[j * d + k]);
  return out;
}

}  // namespace

TEST_CASE("basis states") {
  CHECK(state_close(StateVector::basis_state("+"),
                    {kHalfSqrt2, kHalfSqrt2}));
  CHECK(state_close(StateVector::basis_state("0"), {1.0, 0.0}));
  CHECK(state_close(StateVector::basis_state("Phi-"),
                    {kHalfSqrt2, 0.0, 0.0, -kHalfSqrt2}));
  CHECK(state_close(StateVector::basis_state("Psi+"),
                    {0.0, kHalfSqrt2, kHalfSqrt2, 0.0}));
  CHECK_THROWS_AS(StateVector::basis_state("Q"), std::invalid_argument);
}

TEST_CASE("state vector invariants") {
  CHECK_THROWS_AS(StateVector({2}, {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(StateVector({2}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(StateVector({3}, {1.0, 0.0, 0.0}), std::invalid_argument);
  const double nan = std::nan("");
  CHECK_THROWS_AS(StateVector({2}, {cplx(nan, 0.0), 0.0}),
                  std::invalid_argument);
  CHECK(StateVector().total_dim() == 1);  // scalar state
}

TEST_CASE("tensor products") {
  const StateVector zz = tensor(StateVector::basis_state("0"),
                                StateVector::basis_state("0"));
  CHECK(state_close(zz, {1.0, 0.0, 0.0, 0.0}));

  const StateVector pe = tensor(StateVector::basis_state("+"),
                                StateVector::basis_state("0"));
  CHECK(state_close(pe, {kHalfSqrt2, 0.0, kHalfSqrt2, 0.0}));

  RandomStream rng(21, StreamDomain::Test, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const StateVector a = testutil::random_state({2}, rng);
    const StateVector b = testutil::random_state({2, 2}, rng);
    CHECK(tensor(a, b).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("insert_subsystem reorders correctly") {
  // Insert |1> in the middle of |0>|+>: expect |0>|1>|+>.
  const StateVector s = tensor(StateVector::basis_state("0"),
                               StateVector::basis_state("+"));
  const StateVector out =
      insert_subsystem(s, 1, StateVector::basis_state("1"));
  const StateVector expect =
      tensor(tensor(StateVector::basis_state("0"),
                    StateVector::basis_state("1")),
             StateVector::basis_state("+"));
  CHECK(state_close(out, expect.amps()));
}

TEST_CASE("hadamard and sigma_z actions") {
  const StateVector plus = StateVector::basis_state("+");
  CHECK(state_close(apply_gate(plus, gates::hadamard(), 0), {1.0, 0.0},
                    1e-12));
  CHECK(state_close(apply_gate(plus, gates::sigma_z(), 0),
                    StateVector::basis_state("-").amps()));
  // H then sigma_z on |1>: by direct matrix arithmetic this is |+>.
  const StateVector step =
      apply_gate(StateVector::basis_state("1"), gates::hadamard(), 0);
  CHECK(state_close(apply_gate(step, gates::sigma_z(), 0),
                    StateVector::basis_state("+").amps()));
}

TEST_CASE("gate validation and involutions") {
  CHECK_THROWS_AS(Gate(2, {1.0, 0.0, 0.0, 2.0}), std::invalid_argument);
  // H*H = I and sigma_z*sigma_z = I, checked through double application.
  RandomStream rng(22, StreamDomain::Test, 0);
  for (int rep = 0; rep < 10; ++rep) {
    const StateVector s = testutil::random_state({2}, rng);
    const StateVector hh =
        apply_gate(apply_gate(s, gates::hadamard(), 0), gates::hadamard(), 0);
    const StateVector zz =
        apply_gate(apply_gate(s, gates::sigma_z(), 0), gates::sigma_z(), 0);
    CHECK(state_close(hh, s.amps(), 1e-9));
    CHECK(state_close(zz, s.amps(), 1e-9));
  }
}

TEST_CASE("gate application on embedded targets, any dimension") {
  RandomStream rng(23, StreamDomain::Test, 0);
  const std::vector<std::vector<int>> shapes = {{2}, {2, 2}, {2, 4}, {4},
                                                {2, 2, 4}};
  for (const auto& dims : shapes) {
    for (int target = 0; target < static_cast<int>(dims.size()); ++target) {
      const StateVector s = testutil::random_state(dims, rng);
      const Gate g = testutil::random_unitary(dims[target], rng);
      const StateVector out = apply_gate(s, g, target);
      CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(apply_gate(StateVector::basis_state("0"),
                             testutil::random_unitary(4, rng), 0),
                  std::invalid_argument);
}

TEST_CASE("canonical bases are orthonormal and span") {
  for (const Basis* b : {&Basis::z(), &Basis::x(), &Basis::bell()}) {
    REQUIRE(static_cast<int>(b->vectors.size()) == b->dim);
    for (int i = 0; i < b->dim; ++i) {
      for (int j = 0; j < b->dim; ++j) {
        cplx ip = 0.0;
        for (int k = 0; k < b->dim; ++k) {
          ip += std::conj(b->vectors[i][k]) * b->vectors[j][k];
        }
        CHECK(std::abs(ip - (i == j ? cplx(1.0) : cplx(0.0))) < 1e-9);
      }
    }
  }
  CHECK(std::string(Basis::bell().label(1)) == "Phi-");
  CHECK(std::string(Basis::x().label(0)) == "+");
}

TEST_CASE("measurement on single qubits") {
  const StateVector plus = StateVector::basis_state("+");
  const int t0[] = {0};
  CHECK(measure(plus, Basis::z(), t0, 0.3).index == 0);
  CHECK(measure(plus, Basis::z(), t0, 0.7).index == 1);
  CHECK(measure(plus, Basis::z(), t0, 0.3).probability ==
        doctest::Approx(0.5));

  const MeasurementOutcome minus =
      measure(StateVector::basis_state("-"), Basis::x(), t0, 0.999);
  CHECK(minus.index == 1);
  CHECK(minus.probability == doctest::Approx(1.0));
}

TEST_CASE("bell measurement of |00>") {
  const StateVector zz = tensor(StateVector::basis_state("0"),
                                StateVector::basis_state("0"));
  const int t[] = {0, 1};
  const std::vector<double> probs = outcome_probabilities(zz, Basis::bell(), t);
  // |00> = (Phi+ + Phi-)/sqrt2
  CHECK(probs[0] == doctest::Approx(0.5));
  CHECK(probs[1] == doctest::Approx(0.5));
  CHECK(probs[2] == doctest::Approx(0.0));
  CHECK(probs[3] == doctest::Approx(0.0));
  CHECK(measure(zz, Basis::bell(), t, 0.2).index == 0);
  CHECK(measure(zz, Basis::bell(), t, 0.8).index == 1);
}

TEST_CASE("measurement collapses the partner subsystem") {
  const StateVector phi = StateVector::basis_state("Phi+");
  const int t0[] = {0};
  const MeasurementOutcome m = measure(phi, Basis::z(), t0, 0.7);
  CHECK(m.index == 1);
  CHECK(state_close(m.post_state, {0.0, 1.0}, 1e-12));
}

TEST_CASE("born completeness and determinism on random states") {
  RandomStream rng(24, StreamDomain::Test, 0);
  for (int rep = 0; rep < 30; ++rep) {
    const StateVector s = testutil::random_state({2, 2}, rng);
    const int both[] = {0, 1};
    const int first[] = {0};
    double sum = 0.0;
    for (double p : outcome_probabilities(s, Basis::bell(), both)) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));

    const double r = rng.uniform();
    const MeasurementOutcome a = measure(s, Basis::x(), first, r);
    const MeasurementOutcome b = measure(s, Basis::x(), first, r);
    CHECK(a.index == b.index);
    CHECK(a.post_state == b.post_state);
    CHECK(a.post_state.norm() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("measurement rejects bad arguments") {
  const StateVector plus = StateVector::basis_state("+");
  const int t0[] = {0};
  const int bad[] = {0, 1};
  CHECK_THROWS_AS(measure(plus, Basis::bell(), t0, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(measure(plus, Basis::z(), bad, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(measure(plus, Basis::z(), t0, 1.0), std::invalid_argument);
}

TEST_CASE("partial trace") {
  const int k0[] = {0};
  const int k1[] = {1};
  const DensityMatrix a =
      partial_trace(tensor(StateVector::basis_state("0"),
                           StateVector::basis_state("0")),
                    k0);
  CHECK(close(a.at(0, 0), 1.0));
  CHECK(close(a.at(1, 1), 0.0));

  const DensityMatrix b = partial_trace(StateVector::basis_state("Phi+"), k0);
  CHECK(close(b.at(0, 0), 0.5));
  CHECK(close(b.at(1, 1), 0.5));
  CHECK(close(b.at(0, 1), 0.0));

  const DensityMatrix c =
      partial_trace(tensor(StateVector::basis_state("+"),
                           StateVector::basis_state("0")),
                    k1);
  CHECK(close(c.at(0, 0), 1.0));

  CHECK_THROWS_AS(partial_trace(StateVector::basis_state("Phi+"), {}),
                  std::invalid_argument);
}

TEST_CASE("density matrix validation") {
  CHECK_THROWS_AS(DensityMatrix(2, {1.0, cplx(0.0, 1.0), 0.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(DensityMatrix(2, {0.7, 0.0, 0.0, 0.7}),
                  std::invalid_argument);
  // A valid mixed state passes.
  const DensityMatrix ok(2, {0.25, 0.0, 0.0, 0.75});
  CHECK(ok.dim() == 2);
}

TEST_CASE("von Neumann entropy") {
  CHECK(vn_entropy(DensityMatrix::from_pure(StateVector::basis_state("+"))) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(vn_entropy(DensityMatrix(2, {0.5, 0.0, 0.0, 0.5})) ==
        doctest::Approx(1.0));
  CHECK(vn_entropy(DensityMatrix(
            4, {0.25, 0.0, 0.0, 0.0, 0.0, 0.25, 0.0, 0.0, 0.0, 0.0, 0.25,
                0.0, 0.0, 0.0, 0.0, 0.25})) == doctest::Approx(2.0));
}

TEST_CASE("entropy is invariant under unitary conjugation") {
  RandomStream rng(25, StreamDomain::Test, 0);
  for (int dim : {2, 4}) {
    for (int rep = 0; rep < 10; ++rep) {
      // Random mixture of two pure states.
      const StateVector psi = testutil::random_state(
          dim == 2 ? std::vector<int>{2} : std::vector<int>{2, 2}, rng);
      const StateVector chi = testutil::random_state(
          dim == 2 ? std::vector<int>{2} : std::vector<int>{2, 2}, rng);
      const double p = rng.uniform();
      std::vector<cplx> m(dim * dim);
      for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
          m[r * dim + c] = p * psi.amps()[r] * std::conj(psi.amps()[c]) +
                           (1.0 - p) * chi.amps()[r] * std::conj(chi.amps()[c]);
        }
      }
      const Gate u = testutil::random_unitary(dim, rng);
      const double h0 = vn_entropy(DensityMatrix(dim, m));
      const double h1 =
          vn_entropy(DensityMatrix(dim, conjugate(m, dim, u.matrix())));
      CHECK(h1 == doctest::Approx(h0).epsilon(1e-8));
    }
  }
}

TEST_CASE("helstrom success probability") {
  const DensityMatrix zero = DensityMatrix::from_pure(
      StateVector::basis_state("0"));
  const DensityMatrix one = DensityMatrix::from_pure(
      StateVector::basis_state("1"));
  const DensityMatrix plus = DensityMatrix::from_pure(
      StateVector::basis_state("+"));

  CHECK(helstrom_success(zero, zero, 0.5) == doctest::Approx(0.5));
  CHECK(helstrom_success(zero, one, 0.5) == doctest::Approx(1.0));
  // Eigenvalues of (|0><0| - |+><+|)/2 are +-sqrt(2)/4.
  CHECK(helstrom_success(zero, plus, 0.5) ==
        doctest::Approx(0.5 + std::sqrt(2.0) / 4.0).epsilon(1e-12));
  CHECK_THROWS_AS(helstrom_success(zero, one, 1.5), std::invalid_argument);
}
