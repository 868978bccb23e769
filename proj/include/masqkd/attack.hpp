/*
 * This code is part of the masqkd simulator.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef MASQKD_ATTACK_HPP_
#define MASQKD_ATTACK_HPP_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "masqkd/protocol_kind.hpp"
#include "masqkd/quantum.hpp"
#include "masqkd/rng.hpp"

namespace masqkd {

//============================================================================
// Attack models
//
// The adversary acts on exactly one quantum channel leg per experiment,
// independently per round with the same operation (a collective attack),
// or measure-and-resend (intercept-resend), or not at all.
//
// CollectiveS1 entangles a |+> transit qubit with a 2-dimensional ancilla:
//     |+> |E>  ->  |+> (x) u  +  |-> (x) w
// The vectors u and w are the unnormalized ancilla components; validity
// requires |u|^2 + |w|^2 = 1.
//
// CollectiveS2 is an isometry defined on the computational basis with a
// 4-dimensional ancilla, extended by linearity:
//     |0> |E>  ->  |0> (x) v0  +  |1> (x) v1
//     |1> |E>  ->  |0> (x) w0  +  |1> (x) w1
// Validity: |v0|^2+|v1|^2 = 1, |w0|^2+|w1|^2 = 1, <v0,w0> + <v1,w1> = 0.
//============================================================================

enum class AttackKind { None, InterceptResend, CollectiveS1, CollectiveS2 };

enum class ChannelLeg { TPtoAlice, AliceToBob, BobToTP };

enum class MeasBasisKind { Z, X };

struct AttackModel {
  AttackKind kind = AttackKind::None;
  ChannelLeg location = ChannelLeg::TPtoAlice;

  // InterceptResend
  MeasBasisKind ir_basis = MeasBasisKind::Z;

  // CollectiveS1
  std::array<cplx, 2> u{};
  std::array<cplx, 2> w{};

  // CollectiveS2
  std::array<cplx, 4> v0{};
  std::array<cplx, 4> v1{};
  std::array<cplx, 4> w0{};
  std::array<cplx, 4> w1{};

  bool operator==(const AttackModel&) const = default;
};

/// One violated validity constraint, with how far off it is.
struct Violation {
  std::string constraint;
  double residual;
};

/// Checks the norm/orthogonality constraints of the attack parameters and
/// the location's compatibility with the protocol variant. Returns an empty
/// list when the attack is usable.
std::vector<Violation> validate_attack(const AttackModel& attack,
                                       ProtocolKind kind);

/// Throws std::invalid_argument listing all violations, if any.
void require_valid(const AttackModel& attack, ProtocolKind kind);

/// Eve's per-round state after an attacked round: the collapsed pure ancilla
/// component she holds, plus her eventual guess of the targeted bit.
struct EveRecord {
  int round_index = 0;
  StateVector ancilla_state;
  std::optional<int> eve_guess;
  std::optional<int> target_bit;

  bool operator==(const EveRecord&) const = default;
};

/// Applies the attack to subsystem `target` of `state`. Collective attacks
/// append their ancilla as a new final subsystem; intercept-resend measures
/// the subsystem (consuming one rng draw) and resends the collapsed basis
/// state in place, reporting Eve's outcome via `ir_outcome`. CollectiveS1
/// requires the attacked subsystem to be exactly |+> (it is only defined on
/// the state the source actually emits) and throws otherwise.
StateVector apply_attack(const AttackModel& attack, const StateVector& state,
                         int target, RandomStream& rng,
                         std::optional<int>& ir_outcome);

/// Single-qubit convenience overload (transit is the whole state).
StateVector apply_attack(const AttackModel& attack, const StateVector& transit,
                         RandomStream& rng);

/// Closed-form probability that one attacked check round (Case 1) shows an
/// error, for a validated attack under the given protocol variant.
double predicted_case1_error(const AttackModel& attack, ProtocolKind kind);

/// Eve's ancilla states conditioned on the classical bit she targets
/// (Alice's Z-basis measurement result / the bit Alice resends), with the
/// prior probability of bit 0. Only defined for collective attacks; the
/// conditionals depend on which leg the attack sits on.
struct EveConditionals {
  DensityMatrix rho_given_0;
  DensityMatrix rho_given_1;
  double p0;
};

EveConditionals eve_conditional_states(const AttackModel& attack,
                                       ProtocolKind kind);

/// Holevo bound chi = S(p0 rho0 + p1 rho1) - p0 S(rho0) - p1 S(rho1), in
/// bits; upper-bounds the classical information extractable from the
/// ensemble.
double holevo_info(const DensityMatrix& rho0, const DensityMatrix& rho1,
                   double p0);

/// The two-outcome measurement maximizing Eve's single-shot guess: the
/// projector onto the positive eigenspace of p0 rho0 - p1 rho1. Applied to
/// a pure ancilla |phi>, the probability of guessing 0 is <phi|P0|phi>.
std::vector<cplx> helstrom_projector(const EveConditionals& cond);

/// Builds the zero-disturbance CollectiveS2 attack with w0 = v1, w1 = v0.
/// Preconditions: |v0|^2 + |v1|^2 = 1 and Re<v0,v1> = 0 (required by the
/// isometry cross-constraint once the components are swapped); throws
/// naming the violated constraint otherwise.
AttackModel make_undetectable_s2(const std::array<cplx, 4>& v0,
                                 const std::array<cplx, 4>& v1,
                                 ChannelLeg location = ChannelLeg::AliceToBob);

}  // namespace masqkd

#endif  // MASQKD_ATTACK_HPP_
