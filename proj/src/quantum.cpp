/*
 * This code is part of the masqkd simulator.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "masqkd/quantum.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "masqkd/kernels.hpp"

namespace masqkd {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

int checked_product(const std::vector<int>& dims) {
  int p = 1;
  for (int d : dims) {
    if (d != 2 && d != 4) {
      throw std::invalid_argument("subsystem dimensions must be 2 or 4");
    }
    p *= d;
  }
  if (p > 16) {
    throw std::invalid_argument("total dimension exceeds 16");
  }
  return p;
}

bool all_finite(const std::vector<cplx>& v) {
  return std::all_of(v.begin(), v.end(), [](cplx c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

Eigen::MatrixXcd to_eigen(int dim, const std::vector<cplx>& m) {
  Eigen::MatrixXcd out(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      out(r, c) = m[r * dim + c];
    }
  }
  return out;
}

}  // namespace

//============================================================================
// StateVector
//============================================================================

StateVector::StateVector() : dims_{}, amps_{cplx(1.0, 0.0)} {}

StateVector::StateVector(std::vector<int> dims, std::vector<cplx> amps)
    : dims_(std::move(dims)), amps_(std::move(amps)) {
  const int total = checked_product(dims_);
  if (static_cast<int>(amps_.size()) != total) {
    throw std::invalid_argument("amplitude count does not match dimensions");
  }
  if (!all_finite(amps_)) {
    throw std::invalid_argument("non-finite amplitude");
  }
  const double n = norm();
  if (std::abs(n - 1.0) > kTol) {
    throw std::invalid_argument("state vector is not normalized");
  }
}

double StateVector::norm() const {
  return std::sqrt(kern::norm_sqr(amps_.data(), amps_.size()));
}

StateVector StateVector::basis_state(std::string_view label) {
  const cplx h(kInvSqrt2, 0.0);
  if (label == "0") return StateVector({2}, {1.0, 0.0});
  if (label == "1") return StateVector({2}, {0.0, 1.0});
  if (label == "+") return StateVector({2}, {h, h});
  if (label == "-") return StateVector({2}, {h, -h});
  if (label == "Phi+") return StateVector({2, 2}, {h, 0.0, 0.0, h});
  if (label == "Phi-") return StateVector({2, 2}, {h, 0.0, 0.0, -h});
  if (label == "Psi+") return StateVector({2, 2}, {0.0, h, h, 0.0});
  if (label == "Psi-") return StateVector({2, 2}, {0.0, h, -h, 0.0});
  throw std::invalid_argument("unknown basis state label: " +
                              std::string(label));
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  std::vector<cplx> out(a.amps().size() * b.amps().size());
  kern::active().kron(a.amps().data(), a.amps().size(), b.amps().data(),
                      b.amps().size(), out.data());
  return StateVector(std::move(dims), std::move(out));
}

StateVector insert_subsystem(const StateVector& state, int position,
                             const StateVector& factor) {
  const int nsub = state.subsystem_count();
  if (position < 0 || position > nsub) {
    throw std::invalid_argument("insert position out of range");
  }
  std::size_t pre = 1, post = 1;
  for (int i = 0; i < position; ++i) pre *= state.dims()[i];
  for (int i = position; i < nsub; ++i) post *= state.dims()[i];
  const std::size_t f = factor.amps().size();

  std::vector<int> dims(state.dims().begin(),
                        state.dims().begin() + position);
  dims.insert(dims.end(), factor.dims().begin(), factor.dims().end());
  dims.insert(dims.end(), state.dims().begin() + position,
              state.dims().end());

  std::vector<cplx> out(pre * f * post);
  for (std::size_t a = 0; a < pre; ++a) {
    for (std::size_t k = 0; k < f; ++k) {
      for (std::size_t b = 0; b < post; ++b) {
        out[(a * f + k) * post + b] =
            state.amps()[a * post + b] * factor.amps()[k];
      }
    }
  }
  return StateVector(std::move(dims), std::move(out));
}

//============================================================================
// Gate
//============================================================================

Gate::Gate(int dim, std::vector<cplx> matrix)
    : dim_(dim), m_(std::move(matrix)) {
  if (dim_ != 2 && dim_ != 4) {
    throw std::invalid_argument("gate dimension must be 2 or 4");
  }
  if (static_cast<int>(m_.size()) != dim_ * dim_) {
    throw std::invalid_argument("gate matrix size mismatch");
  }
  if (!all_finite(m_)) {
    throw std::invalid_argument("non-finite gate entry");
  }
  // U†U = I, entrywise within kTol.
  for (int r = 0; r < dim_; ++r) {
    for (int c = 0; c < dim_; ++c) {
      cplx acc = 0.0;
      for (int k = 0; k < dim_; ++k) {
        acc += std::conj(m_[k * dim_ + r]) * m_[k * dim_ + c];
      }
      const cplx expect = (r == c) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
      if (std::abs(acc - expect) > kTol) {
        throw std::invalid_argument("gate is not unitary");
      }
    }
  }
}

namespace gates {

const Gate& hadamard() {
  static const Gate g(2, {cplx(kInvSqrt2, 0.0), cplx(kInvSqrt2, 0.0),
                          cplx(kInvSqrt2, 0.0), cplx(-kInvSqrt2, 0.0)});
  return g;
}

const Gate& sigma_z() {
  static const Gate g(2, {cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0),
                          cplx(-1.0, 0.0)});
  return g;
}

}  // namespace gates

StateVector apply_gate(const StateVector& state, const Gate& gate,
                       int target) {
  if (target < 0 || target >= state.subsystem_count()) {
    throw std::invalid_argument("gate target out of range");
  }
  if (state.dims()[target] != gate.dim()) {
    throw std::invalid_argument("gate dimension does not match subsystem");
  }
  std::size_t stride = 1;
  for (int i = target + 1; i < state.subsystem_count(); ++i) {
    stride *= state.dims()[i];
  }
  std::vector<cplx> amps = state.amps();
  const auto& ops = kern::active();
  if (gate.dim() == 2) {
    ops.butterfly2(amps.data(), amps.size(), stride, gate.matrix().data());
  } else {
    ops.butterfly4(amps.data(), amps.size(), stride, gate.matrix().data());
  }
  return StateVector(state.dims(), std::move(amps));
}

//============================================================================
// Basis
//============================================================================

const Basis& Basis::z() {
  static const Basis b{Kind::Z, 2, {{1.0, 0.0}, {0.0, 1.0}}};
  return b;
}

const Basis& Basis::x() {
  const cplx h(kInvSqrt2, 0.0);
  static const Basis b{Kind::X, 2, {{h, h}, {h, -h}}};
  return b;
}

const Basis& Basis::bell() {
  const cplx h(kInvSqrt2, 0.0);
  static const Basis b{Kind::Bell,
                       4,
                       {{h, 0.0, 0.0, h},
                        {h, 0.0, 0.0, -h},
                        {0.0, h, h, 0.0},
                        {0.0, h, -h, 0.0}}};
  return b;
}

const char* Basis::label(int index) const {
  static const char* z_labels[] = {"0", "1"};
  static const char* x_labels[] = {"+", "-"};
  static const char* bell_labels[] = {"Phi+", "Phi-", "Psi+", "Psi-"};
  if (index < 0 || index >= dim) {
    throw std::invalid_argument("basis index out of range");
  }
  switch (kind) {
    case Kind::Z:
      return z_labels[index];
    case Kind::X:
      return x_labels[index];
    case Kind::Bell:
      return bell_labels[index];
  }
  throw std::logic_error("unreachable");
}

StateVector Basis::state(int index) const {
  if (index < 0 || index >= dim) {
    throw std::invalid_argument("basis index out of range");
  }
  std::vector<int> dims = (dim == 2) ? std::vector<int>{2}
                                     : std::vector<int>{2, 2};
  return StateVector(std::move(dims), vectors[index]);
}

//============================================================================
// Measurement
//============================================================================

namespace {

struct TargetSplit {
  std::size_t target_dim = 1;
  std::size_t rest_dim = 1;
  std::vector<int> rest_dims;
  // Per global amplitude index: its combined target index and rest index.
  std::vector<std::size_t> t_of;
  std::vector<std::size_t> r_of;
};

TargetSplit split_targets(const StateVector& state,
                          std::span<const int> targets) {
  const auto& dims = state.dims();
  const int nsub = static_cast<int>(dims.size());
  std::vector<bool> is_target(nsub, false);
  int prev = -1;
  for (int t : targets) {
    if (t <= prev || t >= nsub) {
      throw std::invalid_argument(
          "targets must be strictly increasing subsystem indices");
    }
    prev = t;
    is_target[t] = true;
  }
  TargetSplit s;
  for (int i = 0; i < nsub; ++i) {
    if (is_target[i]) {
      s.target_dim *= dims[i];
    } else {
      s.rest_dim *= dims[i];
      s.rest_dims.push_back(dims[i]);
    }
  }
  const std::size_t n = state.amps().size();
  s.t_of.resize(n);
  s.r_of.resize(n);
  for (std::size_t g = 0; g < n; ++g) {
    std::size_t rem = g, t = 0, r = 0;
    // Decompose g into per-subsystem digits (row-major, last fastest).
    std::vector<std::size_t> digit(nsub);
    for (int i = nsub - 1; i >= 0; --i) {
      digit[i] = rem % dims[i];
      rem /= dims[i];
    }
    for (int i = 0; i < nsub; ++i) {
      if (is_target[i]) {
        t = t * dims[i] + digit[i];
      } else {
        r = r * dims[i] + digit[i];
      }
    }
    s.t_of[g] = t;
    s.r_of[g] = r;
  }
  return s;
}

}  // namespace

std::vector<double> outcome_probabilities(const StateVector& state,
                                          const Basis& basis,
                                          std::span<const int> targets) {
  const TargetSplit s = split_targets(state, targets);
  if (static_cast<int>(s.target_dim) != basis.dim) {
    throw std::invalid_argument("basis dimension does not match targets");
  }
  std::vector<double> probs(basis.dim);
  std::vector<cplx> proj(s.rest_dim);
  for (int k = 0; k < basis.dim; ++k) {
    std::fill(proj.begin(), proj.end(), cplx(0.0, 0.0));
    for (std::size_t g = 0; g < state.amps().size(); ++g) {
      proj[s.r_of[g]] += std::conj(basis.vectors[k][s.t_of[g]]) *
                         state.amps()[g];
    }
    probs[k] = kern::norm_sqr(proj.data(), proj.size());
  }
  return probs;
}

MeasurementOutcome measure(const StateVector& state, const Basis& basis,
                           std::span<const int> targets, double rand) {
  if (rand < 0.0 || rand >= 1.0) {
    throw std::invalid_argument("rand must lie in [0,1)");
  }
  const TargetSplit s = split_targets(state, targets);
  if (static_cast<int>(s.target_dim) != basis.dim) {
    throw std::invalid_argument("basis dimension does not match targets");
  }

  std::vector<std::vector<cplx>> proj(basis.dim,
                                      std::vector<cplx>(s.rest_dim));
  std::vector<double> probs(basis.dim);
  for (int k = 0; k < basis.dim; ++k) {
    for (std::size_t g = 0; g < state.amps().size(); ++g) {
      proj[k][s.r_of[g]] += std::conj(basis.vectors[k][s.t_of[g]]) *
                            state.amps()[g];
    }
    probs[k] = kern::norm_sqr(proj[k].data(), proj[k].size());
  }

  int outcome = basis.dim - 1;
  double cum = 0.0;
  for (int k = 0; k < basis.dim; ++k) {
    cum += probs[k];
    if (rand < cum) {
      outcome = k;
      break;
    }
  }

  std::vector<cplx> post = std::move(proj[outcome]);
  kern::active().scale(post.data(), post.size(),
                       1.0 / std::sqrt(probs[outcome]));
  return MeasurementOutcome{outcome, probs[outcome],
                            StateVector(s.rest_dims, std::move(post))};
}

//============================================================================
// DensityMatrix and functionals
//============================================================================

DensityMatrix::DensityMatrix(int dim, std::vector<cplx> matrix)
    : dim_(dim), m_(std::move(matrix)) {
  if (dim_ < 1 || dim_ > 4) {
    throw std::invalid_argument("density matrix dimension must be 1..4");
  }
  if (static_cast<int>(m_.size()) != dim_ * dim_) {
    throw std::invalid_argument("density matrix size mismatch");
  }
  if (!all_finite(m_)) {
    throw std::invalid_argument("non-finite density matrix entry");
  }
  cplx trace = 0.0;
  for (int r = 0; r < dim_; ++r) {
    trace += m_[r * dim_ + r];
    for (int c = 0; c < dim_; ++c) {
      if (std::abs(m_[r * dim_ + c] - std::conj(m_[c * dim_ + r])) > kTol) {
        throw std::invalid_argument("density matrix is not Hermitian");
      }
    }
  }
  if (std::abs(trace - cplx(1.0, 0.0)) > kTol) {
    throw std::invalid_argument("density matrix trace is not 1");
  }
  for (double ev : hermitian_eigenvalues(dim_, m_)) {
    if (ev < -kTol) {
      throw std::invalid_argument("density matrix is not positive");
    }
  }
}

DensityMatrix DensityMatrix::from_pure(const StateVector& s) {
  const int d = s.total_dim();
  std::vector<cplx> m(d * d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      m[r * d + c] = s.amps()[r] * std::conj(s.amps()[c]);
    }
  }
  return DensityMatrix(d, std::move(m));
}

DensityMatrix partial_trace(const StateVector& state,
                            std::span<const int> keep) {
  if (keep.empty()) {
    throw std::invalid_argument("keep set must be nonempty");
  }
  // Reuse the target/rest decomposition with kept subsystems as "targets".
  const TargetSplit s = split_targets(state, keep);
  const int d = static_cast<int>(s.target_dim);
  if (d > 4) {
    throw std::invalid_argument("reduced dimension exceeds 4");
  }
  std::vector<cplx> rho(d * d, cplx(0.0, 0.0));
  const std::size_t n = state.amps().size();
  for (std::size_t g1 = 0; g1 < n; ++g1) {
    for (std::size_t g2 = 0; g2 < n; ++g2) {
      if (s.r_of[g1] == s.r_of[g2]) {
        rho[s.t_of[g1] * d + s.t_of[g2]] +=
            state.amps()[g1] * std::conj(state.amps()[g2]);
      }
    }
  }
  return DensityMatrix(d, std::move(rho));
}

std::vector<double> hermitian_eigenvalues(int dim,
                                          const std::vector<cplx>& matrix) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      to_eigen(dim, matrix), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigenvalue decomposition failed");
  }
  std::vector<double> evs(dim);
  for (int i = 0; i < dim; ++i) {
    evs[i] = solver.eigenvalues()(i);
  }
  return evs;
}

double vn_entropy(const DensityMatrix& rho) {
  double h = 0.0;
  for (double ev : hermitian_eigenvalues(rho.dim(), rho.matrix())) {
    if (ev < -kTol) {
      throw std::invalid_argument("vn_entropy: matrix is not positive");
    }
    if (ev > 0.0) {
      h -= ev * std::log2(ev);
    }
  }
  return std::max(h, 0.0);
}

double helstrom_success(const DensityMatrix& rho0, const DensityMatrix& rho1,
                        double p0) {
  if (rho0.dim() != rho1.dim()) {
    throw std::invalid_argument("helstrom_success: dimension mismatch");
  }
  if (p0 < 0.0 || p0 > 1.0) {
    throw std::invalid_argument("helstrom_success: p0 must lie in [0,1]");
  }
  const int d = rho0.dim();
  std::vector<cplx> m(d * d);
  for (int i = 0; i < d * d; ++i) {
    m[i] = p0 * rho0.matrix()[i] - (1.0 - p0) * rho1.matrix()[i];
  }
  double trace_norm = 0.0;
  for (double ev : hermitian_eigenvalues(d, m)) {
    trace_norm += std::abs(ev);
  }
  return 0.5 + 0.5 * trace_norm;
}

}  // namespace masqkd
