/*
 * This code is part of the masqkd simulator.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "masqkd/attack.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace masqkd {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

template <std::size_t N>
double norm_sqr(const std::array<cplx, N>& v) {
  double s = 0.0;
  for (const cplx& c : v) s += std::norm(c);
  return s;
}

template <std::size_t N>
cplx inner(const std::array<cplx, N>& a, const std::array<cplx, N>& b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s += std::conj(a[i]) * b[i];
  return s;
}

template <std::size_t N>
std::array<cplx, N> add(const std::array<cplx, N>& a,
                        const std::array<cplx, N>& b) {
  std::array<cplx, N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + b[i];
  return r;
}

template <std::size_t N>
std::array<cplx, N> sub(const std::array<cplx, N>& a,
                        const std::array<cplx, N>& b) {
  std::array<cplx, N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = a[i] - b[i];
  return r;
}

/// |psi><psi| of the normalized vector, as a dim x dim row-major matrix.
/// Degenerate (near-zero) vectors fall back to |0><0|; callers only hit
/// that case for branches of prior probability zero.
template <std::size_t N>
std::vector<cplx> pure_projector(const std::array<cplx, N>& v) {
  const double n2 = norm_sqr(v);
  std::vector<cplx> m(N * N, cplx(0.0, 0.0));
  if (n2 < 1e-15) {
    m[0] = 1.0;
    return m;
  }
  for (std::size_t r = 0; r < N; ++r) {
    for (std::size_t c = 0; c < N; ++c) {
      m[r * N + c] = v[r] * std::conj(v[c]) / n2;
    }
  }
  return m;
}

/// (sum_k x_k x_k†) / (sum_k |x_k|^2)
template <std::size_t N>
std::vector<cplx> mixture(std::initializer_list<std::array<cplx, N>> parts) {
  std::vector<cplx> m(N * N, cplx(0.0, 0.0));
  double total = 0.0;
  for (const auto& v : parts) total += norm_sqr(v);
  if (total < 1e-15) {
    m[0] = 1.0;
    return m;
  }
  for (const auto& v : parts) {
    for (std::size_t r = 0; r < N; ++r) {
      for (std::size_t c = 0; c < N; ++c) {
        m[r * N + c] += v[r] * std::conj(v[c]) / total;
      }
    }
  }
  return m;
}

bool is_plus_state(const StateVector& s) {
  if (s.subsystem_count() != 1 || s.dims()[0] != 2) return false;
  return std::abs(s.amps()[0] - cplx(kInvSqrt2, 0.0)) <= kTol &&
         std::abs(s.amps()[1] - cplx(kInvSqrt2, 0.0)) <= kTol;
}

}  // namespace

//============================================================================
// Validation
//============================================================================

std::vector<Violation> validate_attack(const AttackModel& attack,
                                       ProtocolKind kind) {
  std::vector<Violation> out;
  if (attack.kind == AttackKind::None) {
    return out;
  }

  // Leg compatibility. The base protocol has no quantum return leg, and the
  // reference protocol's only attackable leg here is the particle the TP
  // sends toward Alice.
  switch (kind) {
    case ProtocolKind::Base:
      if (attack.location == ChannelLeg::BobToTP) {
        out.push_back({"location: base protocol has no Bob->TP leg", 0.0});
      }
      break;
    case ProtocolKind::Improved:
      break;
    case ProtocolKind::KrawecRef:
      if (attack.location != ChannelLeg::TPtoAlice) {
        out.push_back(
            {"location: krawec_ref supports attacks on the TP->Alice "
             "particle only",
             0.0});
      }
      break;
  }

  if (attack.kind == AttackKind::CollectiveS1) {
    const double n = norm_sqr(attack.u) + norm_sqr(attack.w);
    if (std::abs(n - 1.0) > kTol) {
      out.push_back({"s1: |u|^2 + |w|^2 = 1", std::abs(n - 1.0)});
    }
    if (kind == ProtocolKind::KrawecRef) {
      out.push_back(
          {"s1: defined on |+> inputs; krawec_ref has no |+> leg", 0.0});
    }
  } else if (attack.kind == AttackKind::CollectiveS2) {
    const double nv = norm_sqr(attack.v0) + norm_sqr(attack.v1);
    const double nw = norm_sqr(attack.w0) + norm_sqr(attack.w1);
    const cplx cross = inner(attack.v0, attack.w0) + inner(attack.v1, attack.w1);
    if (std::abs(nv - 1.0) > kTol) {
      out.push_back({"s2: |v0|^2 + |v1|^2 = 1", std::abs(nv - 1.0)});
    }
    if (std::abs(nw - 1.0) > kTol) {
      out.push_back({"s2: |w0|^2 + |w1|^2 = 1", std::abs(nw - 1.0)});
    }
    if (std::abs(cross) > kTol) {
      out.push_back({"s2: <v0,w0> + <v1,w1> = 0", std::abs(cross)});
    }
  }
  return out;
}

void require_valid(const AttackModel& attack, ProtocolKind kind) {
  const auto violations = validate_attack(attack, kind);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid attack:";
  for (const auto& v : violations) {
    msg << " [" << v.constraint << ", residual " << v.residual << "]";
  }
  throw std::invalid_argument(msg.str());
}

//============================================================================
// Application
//============================================================================

StateVector apply_attack(const AttackModel& attack, const StateVector& state,
                         int target, RandomStream& rng,
                         std::optional<int>& ir_outcome) {
  ir_outcome.reset();
  switch (attack.kind) {
    case AttackKind::None:
      return state;

    case AttackKind::InterceptResend: {
      const Basis& basis = attack.ir_basis == MeasBasisKind::Z
                               ? Basis::z()
                               : Basis::x();
      const int targets[] = {target};
      const MeasurementOutcome m =
          measure(state, basis, targets, rng.uniform());
      ir_outcome = m.index;
      return insert_subsystem(m.post_state, target, basis.state(m.index));
    }

    case AttackKind::CollectiveS1: {
      if (!is_plus_state(state)) {
        throw std::invalid_argument(
            "strategy 1 attack applied to a leg whose input is not |+>");
      }
      // |+>|E> -> |+> u + |-> w = (1/sqrt2)(|0>(u+w) + |1>(u-w))
      const auto p = add(attack.u, attack.w);
      const auto m = sub(attack.u, attack.w);
      std::vector<cplx> amps(4);
      amps[0] = kInvSqrt2 * p[0];
      amps[1] = kInvSqrt2 * p[1];
      amps[2] = kInvSqrt2 * m[0];
      amps[3] = kInvSqrt2 * m[1];
      return StateVector({2, 2}, std::move(amps));
    }

    case AttackKind::CollectiveS2: {
      if (target < 0 || target >= state.subsystem_count() ||
          state.dims()[target] != 2) {
        throw std::invalid_argument(
            "strategy 2 attack requires a qubit subsystem");
      }
      std::size_t stride = 1;
      for (int i = target + 1; i < state.subsystem_count(); ++i) {
        stride *= state.dims()[i];
      }
      // Isometry columns: V[out][in] is the ancilla component.
      const std::array<cplx, 4>* v[2][2] = {{&attack.v0, &attack.w0},
                                            {&attack.v1, &attack.w1}};
      std::vector<int> dims = state.dims();
      dims.push_back(4);
      std::vector<cplx> out(state.amps().size() * 4, cplx(0.0, 0.0));
      const std::size_t n = state.amps().size();
      for (std::size_t g = 0; g < n; ++g) {
        const std::size_t outer = g / (2 * stride);
        const std::size_t in_bit = (g / stride) % 2;
        const std::size_t offset = g % stride;
        for (std::size_t out_bit = 0; out_bit < 2; ++out_bit) {
          const std::size_t base =
              ((outer * 2 + out_bit) * stride + offset) * 4;
          const std::array<cplx, 4>& col = *v[out_bit][in_bit];
          for (std::size_t e = 0; e < 4; ++e) {
            out[base + e] += col[e] * state.amps()[g];
          }
        }
      }
      return StateVector(std::move(dims), std::move(out));
    }
  }
  throw std::logic_error("unreachable");
}

StateVector apply_attack(const AttackModel& attack, const StateVector& transit,
                         RandomStream& rng) {
  std::optional<int> ignored;
  return apply_attack(attack, transit, 0, rng, ignored);
}

//============================================================================
// Predictions
//============================================================================

double predicted_case1_error(const AttackModel& attack, ProtocolKind kind) {
  switch (attack.kind) {
    case AttackKind::None:
      return 0.0;
    case AttackKind::InterceptResend:
      // Check rounds carry an X-basis state on every attackable leg, so a
      // Z-basis intercept randomizes the check outcome and an X-basis
      // intercept passes through undisturbed.
      return attack.ir_basis == MeasBasisKind::Z ? 0.5 : 0.0;
    case AttackKind::CollectiveS1:
      return norm_sqr(attack.w);
    case AttackKind::CollectiveS2: {
      const auto minus =
          sub(add(attack.v0, attack.w0), add(attack.v1, attack.w1));
      if (kind == ProtocolKind::KrawecRef) {
        // P(Phi-) after attacking one half of Phi+ and both reflect.
        return 0.25 * norm_sqr(sub(attack.v0, attack.w1));
      }
      if (kind == ProtocolKind::Improved &&
          attack.location == ChannelLeg::BobToTP) {
        // The returned check state is |+> or |-> with equal odds; average
        // the flip probabilities of the two inputs.
        const auto minus_of_minus =
            sub(add(attack.v0, attack.v1), add(attack.w0, attack.w1));
        return 0.125 * (norm_sqr(minus) + norm_sqr(minus_of_minus));
      }
      return 0.25 * norm_sqr(minus);
    }
  }
  throw std::logic_error("unreachable");
}

//============================================================================
// Eve's information
//============================================================================

EveConditionals eve_conditional_states(const AttackModel& attack,
                                       ProtocolKind kind) {
  if (attack.kind == AttackKind::CollectiveS1) {
    // After Alice's Z measurement the ancilla collapses onto u+w or u-w.
    const auto p = add(attack.u, attack.w);
    const auto m = sub(attack.u, attack.w);
    return EveConditionals{DensityMatrix(2, pure_projector(p)),
                           DensityMatrix(2, pure_projector(m)),
                           0.5 * norm_sqr(p)};
  }
  if (attack.kind != AttackKind::CollectiveS2) {
    throw std::invalid_argument(
        "eve_conditional_states is defined for collective attacks only");
  }

  if (kind == ProtocolKind::KrawecRef) {
    // Attacked Bell half: conditioning on Alice's result leaves a mixture
    // over the partner qubit's branches.
    const double p0 = 0.5 * (norm_sqr(attack.v0) + norm_sqr(attack.w0));
    return EveConditionals{
        DensityMatrix(4, mixture({attack.v0, attack.w0})),
        DensityMatrix(4, mixture({attack.v1, attack.w1})), p0};
  }

  switch (attack.location) {
    case ChannelLeg::TPtoAlice: {
      // Attacked |+>; Alice's result 0/1 collapses the ancilla onto
      // (v0+w0) or (v1+w1).
      const auto c0 = add(attack.v0, attack.w0);
      const auto c1 = add(attack.v1, attack.w1);
      return EveConditionals{DensityMatrix(4, pure_projector(c0)),
                             DensityMatrix(4, pure_projector(c1)),
                             0.5 * norm_sqr(c0)};
    }
    case ChannelLeg::AliceToBob: {
      // Alice resends |0> or |1>; Bob's later measurement branch weights
      // the ancilla components.
      return EveConditionals{
          DensityMatrix(4, mixture({attack.v0, attack.v1})),
          DensityMatrix(4, mixture({attack.w0, attack.w1})), 0.5};
    }
    case ChannelLeg::BobToTP: {
      // The key bit (Bob's sigma_z decision) never reaches this leg: the
      // outgoing state is |+> or |-> with equal odds under either bit, so
      // both conditionals are the same mixture.
      const auto a = add(attack.v0, attack.w0);
      const auto b = add(attack.v1, attack.w1);
      const auto c = sub(attack.v0, attack.w0);
      const auto d = sub(attack.v1, attack.w1);
      const auto rho = mixture({a, b, c, d});
      return EveConditionals{DensityMatrix(4, rho), DensityMatrix(4, rho),
                             0.5};
    }
  }
  throw std::logic_error("unreachable");
}

double holevo_info(const DensityMatrix& rho0, const DensityMatrix& rho1,
                   double p0) {
  if (rho0.dim() != rho1.dim()) {
    throw std::invalid_argument("holevo_info: dimension mismatch");
  }
  if (p0 < 0.0 || p0 > 1.0) {
    throw std::invalid_argument("holevo_info: p0 must lie in [0,1]");
  }
  const double p1 = 1.0 - p0;
  const int d = rho0.dim();
  std::vector<cplx> avg(d * d);
  for (int i = 0; i < d * d; ++i) {
    avg[i] = p0 * rho0.matrix()[i] + p1 * rho1.matrix()[i];
  }
  double chi = vn_entropy(DensityMatrix(d, std::move(avg))) -
               p0 * vn_entropy(rho0) - p1 * vn_entropy(rho1);
  if (chi < 0.0 && chi > -1e-12) {
    chi = 0.0;  // rounding of an exactly-zero ensemble
  }
  return chi;
}

std::vector<cplx> helstrom_projector(const EveConditionals& cond) {
  const int d = cond.rho_given_0.dim();
  Eigen::MatrixXcd m(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      m(r, c) = cond.p0 * cond.rho_given_0.at(r, c) -
                (1.0 - cond.p0) * cond.rho_given_1.at(r, c);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigenvalue decomposition failed");
  }
  std::vector<cplx> proj(d * d, cplx(0.0, 0.0));
  for (int k = 0; k < d; ++k) {
    if (solver.eigenvalues()(k) > 0.0) {
      for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
          proj[r * d + c] += solver.eigenvectors()(r, k) *
                             std::conj(solver.eigenvectors()(c, k));
        }
      }
    }
  }
  return proj;
}

AttackModel make_undetectable_s2(const std::array<cplx, 4>& v0,
                                 const std::array<cplx, 4>& v1,
                                 ChannelLeg location) {
  const double n = norm_sqr(v0) + norm_sqr(v1);
  if (std::abs(n - 1.0) > kTol) {
    throw std::invalid_argument(
        "make_undetectable_s2: |v0|^2 + |v1|^2 = 1 violated");
  }
  if (std::abs(inner(v0, v1).real()) > kTol) {
    throw std::invalid_argument(
        "make_undetectable_s2: Re<v0,v1> = 0 violated");
  }
  AttackModel attack;
  attack.kind = AttackKind::CollectiveS2;
  attack.location = location;
  attack.v0 = v0;
  attack.v1 = v1;
  attack.w0 = v1;
  attack.w1 = v0;
  return attack;
}

}  // namespace masqkd
