/*
 * This code is part of the masqkd simulator.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef MASQKD_PROTOCOL_HPP_
#define MASQKD_PROTOCOL_HPP_

#include <optional>
#include <string>
#include <vector>

#include "masqkd/attack.hpp"
#include "masqkd/config.hpp"
#include "masqkd/protocol_kind.hpp"
#include "masqkd/rng.hpp"

namespace masqkd {

//============================================================================
// Round records
//============================================================================

enum class PartyAction { Reflect, MeasureResend };

enum class RoundCase { Case1, Case2, Case3 };

/// Alice's per-round decision; measured_bit is present exactly when she
/// measure-resends. Also reused for Bob in the reference protocol, where
/// both parties act symmetrically.
struct AliceChoice {
  PartyAction action = PartyAction::Reflect;
  std::optional<int> measured_bit;

  bool operator==(const AliceChoice&) const = default;
};

/// Bob's per-round decision. `hadamard` applies to the base and improved
/// variants; `sigma_z` only to improved rounds; `measured_bit` only to base
/// rounds; `krawec` replaces all of these in reference-protocol rounds.
struct BobChoice {
  std::optional<bool> hadamard;
  std::optional<bool> sigma_z;
  std::optional<int> measured_bit;
  std::optional<AliceChoice> krawec;

  bool operator==(const BobChoice&) const = default;
};

/// Everything one round produced. tp_x_result (0 = "+", 1 = "-") is set for
/// improved rounds; tp_message (+1/-1) for reference rounds. alice_key_bit
/// and bob_key_bit are the two parties' raw-key views of a key round; the
/// agreed shared_bit is present when the round actually contributes a key
/// bit under the protocol's rules (under attack the views can disagree, in
/// which case shared_bit is absent and the mismatch is what postprocessing
/// counts).
struct RoundRecord {
  int round_index = 0;
  ProtocolKind kind = ProtocolKind::Base;
  AliceChoice alice;
  BobChoice bob;
  std::optional<int> tp_x_result;
  std::optional<int> tp_message;
  RoundCase round_case = RoundCase::Case3;
  bool check_error = false;
  std::optional<int> shared_bit;
  std::optional<int> alice_key_bit;
  std::optional<int> bob_key_bit;
  int prepared_count = 1;
  std::optional<EveRecord> eve;

  bool operator==(const RoundRecord&) const = default;
};

struct ClassicalMessage {
  int round_index;
  std::string sender;
  std::string receiver;
  std::string payload;

  bool operator==(const ClassicalMessage&) const = default;
};

/// Full run log: the config snapshot, every round, and the ordered
/// authenticated-channel message log (per round: any TP publication first,
/// then the Alice<->Bob operation discussion).
struct Transcript {
  ExperimentConfig config;
  std::vector<RoundRecord> rounds;
  std::vector<ClassicalMessage> classical_messages;

  bool operator==(const Transcript&) const = default;
};

//============================================================================
// Sifting rules
//============================================================================

/// Case classification from the parties' public operation announcements:
///   base:      (Reflect, H) -> Case1, (MeasureResend, no H) -> Case2
///   improved:  (Reflect, no H) -> Case1, (MeasureResend, H) -> Case2
///   krawec_ref: both reflect -> Case1, both measure-resend -> Case2
/// everything else is Case3 (discarded).
RoundCase classify_case(ProtocolKind kind, const AliceChoice& alice,
                        const BobChoice& bob);

/// Base-protocol key rule: both measured bits agree -> that bit; mismatch
/// (only possible under attack) -> no shared bit.
std::optional<int> shared_bit_base(int alice_bit, int bob_bit);

/// Improved-protocol key rule, from Alice's point of view: her measured bit
/// plus TP's published X result (0="+", 1="-") determine the shared bit and
/// her inference of whether Bob applied sigma_z:
///   (0,-) -> bit 0, sigma_z     (1,+) -> bit 0, sigma_z
///   (0,+) -> bit 1, no sigma_z  (1,-) -> bit 1, no sigma_z
struct ImprovedSharedBit {
  int bit;
  bool inferred_sigma_z;

  bool operator==(const ImprovedSharedBit&) const = default;
};
ImprovedSharedBit shared_bit_improved(int alice_bit, int tp_x_result);

/// Improved-protocol check rule (only Bob can evaluate it): with sigma_z
/// the published result must be "-", otherwise "+".
bool check_case1_improved(bool bob_sigma_z, int tp_x_result);

/// Reference-protocol TP message: -1 for Bell outcome Phi- (index 1),
/// +1 otherwise.
int krawec_tp_message(int bell_outcome);

//============================================================================
// Round engine
//============================================================================

/// Test hook: pins selected party choices instead of drawing them.
struct RoundOverrides {
  std::optional<PartyAction> alice_action;
  std::optional<bool> bob_hadamard;
  std::optional<bool> bob_sigma_z;
  std::optional<PartyAction> bob_krawec_action;
};

/// Simulates one full round: preparation, the attack on its configured leg,
/// party choices, terminal measurement, case classification. The rng stream
/// must be the round's own substream; draws happen in a fixed documented
/// order so rounds are reproducible independently of scheduling. Throws if
/// the attack is not valid for this protocol variant.
RoundRecord run_round(ProtocolKind kind, int round_index,
                      const AttackModel& attack, RandomStream& rng,
                      const RoundOverrides& overrides = {});

/// Runs all 8n rounds (optionally on several workers; the transcript is
/// identical regardless of worker count) and assembles the message log in
/// round order. Abort decisions are not taken here; postprocessing owns
/// them so statistics are always available.
Transcript run_protocol(const ExperimentConfig& config);

}  // namespace masqkd

#endif  // MASQKD_PROTOCOL_HPP_
