/*
 * This code is part of the masqkd simulator.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "masqkd/protocol.hpp"

#include <stdexcept>
#include <thread>

#include "masqkd/quantum.hpp"

namespace masqkd {

//============================================================================
// Sifting rules
//============================================================================

RoundCase classify_case(ProtocolKind kind, const AliceChoice& alice,
                        const BobChoice& bob) {
  switch (kind) {
    case ProtocolKind::Base: {
      const bool h = bob.hadamard.value();
      if (alice.action == PartyAction::Reflect && h) return RoundCase::Case1;
      if (alice.action == PartyAction::MeasureResend && !h)
        return RoundCase::Case2;
      return RoundCase::Case3;
    }
    case ProtocolKind::Improved: {
      const bool h = bob.hadamard.value();
      if (alice.action == PartyAction::Reflect && !h) return RoundCase::Case1;
      if (alice.action == PartyAction::MeasureResend && h)
        return RoundCase::Case2;
      return RoundCase::Case3;
    }
    case ProtocolKind::KrawecRef: {
      const PartyAction b = bob.krawec.value().action;
      if (alice.action == PartyAction::Reflect &&
          b == PartyAction::Reflect) {
        return RoundCase::Case1;
      }
      if (alice.action == PartyAction::MeasureResend &&
          b == PartyAction::MeasureResend) {
        return RoundCase::Case2;
      }
      return RoundCase::Case3;
    }
  }
  throw std::logic_error("unreachable");
}

std::optional<int> shared_bit_base(int alice_bit, int bob_bit) {
  if (alice_bit == bob_bit) {
    return alice_bit;
  }
  return std::nullopt;
}

ImprovedSharedBit shared_bit_improved(int alice_bit, int tp_x_result) {
  // (alice bit, TP X result) -> (shared bit, Bob applied sigma_z)
  if (alice_bit == 0 && tp_x_result == 1) return {0, true};
  if (alice_bit == 0 && tp_x_result == 0) return {1, false};
  if (alice_bit == 1 && tp_x_result == 0) return {0, true};
  return {1, false};  // (1, "-")
}

bool check_case1_improved(bool bob_sigma_z, int tp_x_result) {
  return bob_sigma_z ? (tp_x_result != 1) : (tp_x_result != 0);
}

int krawec_tp_message(int bell_outcome) {
  if (bell_outcome < 0 || bell_outcome > 3) {
    throw std::invalid_argument("invalid Bell outcome");
  }
  return bell_outcome == 1 ? -1 : +1;  // index 1 = Phi-
}

//============================================================================
// Round engine
//============================================================================

namespace {

/// Z-measures `target`, then replaces it with a freshly prepared copy of
/// the observed basis state (measure-resend). Returns the measured bit.
int measure_resend(StateVector& state, int target, RandomStream& rng) {
  const int targets[] = {target};
  const MeasurementOutcome m =
      measure(state, Basis::z(), targets, rng.uniform());
  state = insert_subsystem(m.post_state, target, Basis::z().state(m.index));
  return m.index;
}

bool attack_on(const AttackModel& attack, ChannelLeg leg) {
  return attack.kind != AttackKind::None && attack.location == leg;
}

/// Eve's Helstrom-optimal guess from her collapsed pure ancilla. One rng
/// draw; returns the guessed bit.
int eve_guess_bit(const AttackModel& attack, ProtocolKind kind,
                  const StateVector& ancilla, RandomStream& rng) {
  const EveConditionals cond = eve_conditional_states(attack, kind);
  const std::vector<cplx> p0 = helstrom_projector(cond);
  const int d = ancilla.total_dim();
  cplx expect = 0.0;
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      expect += std::conj(ancilla.amps()[r]) * p0[r * d + c] *
                ancilla.amps()[c];
    }
  }
  return rng.uniform() < expect.real() ? 0 : 1;
}

void push_msg(std::vector<ClassicalMessage>* msgs, int round,
              std::string sender, std::string receiver, std::string payload) {
  if (msgs != nullptr) {
    msgs->push_back({round, std::move(sender), std::move(receiver),
                     std::move(payload)});
  }
}

const char* action_payload(PartyAction a) {
  return a == PartyAction::Reflect ? "op:reflect" : "op:measure_resend";
}

RoundRecord simulate_base(int round_index, const AttackModel& attack,
                          RandomStream& rng, const RoundOverrides& overrides,
                          std::vector<ClassicalMessage>* msgs) {
  RoundRecord rec;
  rec.round_index = round_index;
  rec.kind = ProtocolKind::Base;

  StateVector state = StateVector::basis_state("+");
  rec.prepared_count = 1;
  std::optional<int> ir_outcome;
  bool attacked = false;

  if (attack_on(attack, ChannelLeg::TPtoAlice)) {
    state = apply_attack(attack, state, 0, rng, ir_outcome);
    attacked = true;
  }

  rec.alice.action = overrides.alice_action.value_or(
      rng.coin() ? PartyAction::Reflect : PartyAction::MeasureResend);
  if (rec.alice.action == PartyAction::MeasureResend) {
    rec.alice.measured_bit = measure_resend(state, 0, rng);
    rec.prepared_count += 1;
  }

  if (attack_on(attack, ChannelLeg::AliceToBob)) {
    std::optional<int> ir2;
    state = apply_attack(attack, state, 0, rng, ir2);
    if (ir2) ir_outcome = ir2;
    attacked = true;
  }

  rec.bob.hadamard = overrides.bob_hadamard.value_or(rng.coin());
  if (*rec.bob.hadamard) {
    state = apply_gate(state, gates::hadamard(), 0);
  }
  const int targets[] = {0};
  const MeasurementOutcome m =
      measure(state, Basis::z(), targets, rng.uniform());
  rec.bob.measured_bit = m.index;

  rec.round_case = classify_case(ProtocolKind::Base, rec.alice, rec.bob);
  if (rec.round_case == RoundCase::Case1) {
    rec.check_error = (m.index != 0);
  } else if (rec.round_case == RoundCase::Case2) {
    rec.alice_key_bit = rec.alice.measured_bit;
    rec.bob_key_bit = m.index;
    rec.shared_bit = shared_bit_base(*rec.alice.measured_bit, m.index);
  }

  push_msg(msgs, round_index, "Alice", "Bob", action_payload(rec.alice.action));
  push_msg(msgs, round_index, "Bob", "Alice",
           std::string("hadamard:") + (*rec.bob.hadamard ? "1" : "0"));
  if (rec.round_case == RoundCase::Case1) {
    push_msg(msgs, round_index, "Bob", "Alice",
             std::string("check_result:") + std::to_string(m.index));
  }

  if (attacked) {
    EveRecord er;
    er.round_index = round_index;
    er.ancilla_state = m.post_state;
    er.target_bit = rec.alice.measured_bit;
    if (attack.kind == AttackKind::InterceptResend) {
      er.eve_guess = ir_outcome;
    } else {
      er.eve_guess =
          eve_guess_bit(attack, ProtocolKind::Base, m.post_state, rng);
    }
    rec.eve = std::move(er);
  }
  return rec;
}

RoundRecord simulate_improved(int round_index, const AttackModel& attack,
                              RandomStream& rng,
                              const RoundOverrides& overrides,
                              std::vector<ClassicalMessage>* msgs) {
  RoundRecord rec;
  rec.round_index = round_index;
  rec.kind = ProtocolKind::Improved;

  StateVector state = StateVector::basis_state("+");
  rec.prepared_count = 1;
  std::optional<int> ir_outcome;
  bool attacked = false;

  auto maybe_attack = [&](ChannelLeg leg) {
    if (attack_on(attack, leg)) {
      std::optional<int> ir;
      state = apply_attack(attack, state, 0, rng, ir);
      if (ir) ir_outcome = ir;
      attacked = true;
    }
  };

  maybe_attack(ChannelLeg::TPtoAlice);

  rec.alice.action = overrides.alice_action.value_or(
      rng.coin() ? PartyAction::Reflect : PartyAction::MeasureResend);
  if (rec.alice.action == PartyAction::MeasureResend) {
    rec.alice.measured_bit = measure_resend(state, 0, rng);
    rec.prepared_count += 1;
  }

  maybe_attack(ChannelLeg::AliceToBob);

  rec.bob.hadamard = overrides.bob_hadamard.value_or(rng.coin());
  rec.bob.sigma_z = overrides.bob_sigma_z.value_or(rng.coin());
  if (*rec.bob.hadamard) {
    state = apply_gate(state, gates::hadamard(), 0);
  }
  if (*rec.bob.sigma_z) {
    state = apply_gate(state, gates::sigma_z(), 0);
  }

  maybe_attack(ChannelLeg::BobToTP);

  const int targets[] = {0};
  const MeasurementOutcome m =
      measure(state, Basis::x(), targets, rng.uniform());
  rec.tp_x_result = m.index;

  rec.round_case = classify_case(ProtocolKind::Improved, rec.alice, rec.bob);
  if (rec.round_case == RoundCase::Case1) {
    rec.check_error = check_case1_improved(*rec.bob.sigma_z, m.index);
  } else if (rec.round_case == RoundCase::Case2) {
    const ImprovedSharedBit alice_view =
        shared_bit_improved(*rec.alice.measured_bit, m.index);
    rec.alice_key_bit = alice_view.bit;
    rec.bob_key_bit = *rec.bob.sigma_z ? 0 : 1;
    if (*rec.alice_key_bit == *rec.bob_key_bit) {
      rec.shared_bit = rec.alice_key_bit;
    }
  }

  // TP publishes every result before the parties discuss operations.
  push_msg(msgs, round_index, "TP", "all",
           std::string("x_result:") + Basis::x().label(m.index));
  push_msg(msgs, round_index, "Alice", "Bob", action_payload(rec.alice.action));
  push_msg(msgs, round_index, "Bob", "Alice",
           std::string("hadamard:") + (*rec.bob.hadamard ? "1" : "0"));
  if (rec.round_case == RoundCase::Case1) {
    push_msg(msgs, round_index, "Bob", "Alice",
             rec.check_error ? "check:fail" : "check:pass");
  }

  if (attacked) {
    EveRecord er;
    er.round_index = round_index;
    er.ancilla_state = m.post_state;
    if (attack.location == ChannelLeg::BobToTP) {
      er.target_bit = *rec.bob.sigma_z ? 0 : 1;
    } else {
      er.target_bit = rec.alice.measured_bit;
    }
    if (attack.kind == AttackKind::InterceptResend) {
      er.eve_guess = ir_outcome;
    } else {
      er.eve_guess =
          eve_guess_bit(attack, ProtocolKind::Improved, m.post_state, rng);
    }
    rec.eve = std::move(er);
  }
  return rec;
}

RoundRecord simulate_krawec(int round_index, const AttackModel& attack,
                            RandomStream& rng,
                            const RoundOverrides& overrides,
                            std::vector<ClassicalMessage>* msgs) {
  RoundRecord rec;
  rec.round_index = round_index;
  rec.kind = ProtocolKind::KrawecRef;

  StateVector state = StateVector::basis_state("Phi+");
  rec.prepared_count = 2;
  std::optional<int> ir_outcome;
  bool attacked = false;

  if (attack_on(attack, ChannelLeg::TPtoAlice)) {
    state = apply_attack(attack, state, 0, rng, ir_outcome);
    attacked = true;
  }

  rec.alice.action = overrides.alice_action.value_or(
      rng.coin() ? PartyAction::Reflect : PartyAction::MeasureResend);
  if (rec.alice.action == PartyAction::MeasureResend) {
    rec.alice.measured_bit = measure_resend(state, 0, rng);
    rec.prepared_count += 1;
  }

  AliceChoice bob;
  bob.action = overrides.bob_krawec_action.value_or(
      rng.coin() ? PartyAction::Reflect : PartyAction::MeasureResend);
  if (bob.action == PartyAction::MeasureResend) {
    bob.measured_bit = measure_resend(state, 1, rng);
    rec.prepared_count += 1;
  }
  rec.bob.krawec = bob;

  const int targets[] = {0, 1};
  const MeasurementOutcome m =
      measure(state, Basis::bell(), targets, rng.uniform());
  rec.tp_message = krawec_tp_message(m.index);

  rec.round_case = classify_case(ProtocolKind::KrawecRef, rec.alice, rec.bob);
  if (rec.round_case == RoundCase::Case1) {
    rec.check_error = (*rec.tp_message == -1);
  } else if (rec.round_case == RoundCase::Case2 && *rec.tp_message == -1) {
    rec.alice_key_bit = rec.alice.measured_bit;
    rec.bob_key_bit = bob.measured_bit;
    if (*rec.alice_key_bit == *rec.bob_key_bit) {
      rec.shared_bit = rec.alice_key_bit;
    }
  }

  push_msg(msgs, round_index, "TP", "all",
           std::string("message:") + (*rec.tp_message == -1 ? "-1" : "+1"));
  push_msg(msgs, round_index, "Alice", "Bob", action_payload(rec.alice.action));
  push_msg(msgs, round_index, "Bob", "Alice", action_payload(bob.action));

  if (attacked) {
    EveRecord er;
    er.round_index = round_index;
    er.ancilla_state = m.post_state;
    er.target_bit = rec.alice.measured_bit;
    if (attack.kind == AttackKind::InterceptResend) {
      er.eve_guess = ir_outcome;
    } else {
      er.eve_guess =
          eve_guess_bit(attack, ProtocolKind::KrawecRef, m.post_state, rng);
    }
    rec.eve = std::move(er);
  }
  return rec;
}

RoundRecord simulate_round(ProtocolKind kind, int round_index,
                           const AttackModel& attack, RandomStream& rng,
                           const RoundOverrides& overrides,
                           std::vector<ClassicalMessage>* msgs) {
  switch (kind) {
    case ProtocolKind::Base:
      return simulate_base(round_index, attack, rng, overrides, msgs);
    case ProtocolKind::Improved:
      return simulate_improved(round_index, attack, rng, overrides, msgs);
    case ProtocolKind::KrawecRef:
      return simulate_krawec(round_index, attack, rng, overrides, msgs);
  }
  throw std::logic_error("unreachable");
}

}  // namespace

RoundRecord run_round(ProtocolKind kind, int round_index,
                      const AttackModel& attack, RandomStream& rng,
                      const RoundOverrides& overrides) {
  require_valid(attack, kind);
  return simulate_round(kind, round_index, attack, rng, overrides, nullptr);
}

Transcript run_protocol(const ExperimentConfig& config) {
  require_valid(config.attack, config.protocol);

  const std::uint64_t total = config.rounds();
  Transcript t;
  t.config = config;
  t.rounds.resize(total);
  std::vector<std::vector<ClassicalMessage>> per_round_msgs(total);

  auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      RandomStream rng(config.seed, StreamDomain::Round, i);
      t.rounds[i] =
          simulate_round(config.protocol, static_cast<int>(i), config.attack,
                         rng, RoundOverrides{}, &per_round_msgs[i]);
    }
  };

  const int workers = std::max(1, config.workers);
  if (workers == 1 || total < 2) {
    run_range(0, total);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (total + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::uint64_t begin = w * chunk;
      if (begin >= total) break;
      const std::uint64_t end = std::min(total, begin + chunk);
      pool.emplace_back(run_range, begin, end);
    }
    for (auto& th : pool) {
      th.join();
    }
  }

  for (auto& msgs : per_round_msgs) {
    t.classical_messages.insert(t.classical_messages.end(), msgs.begin(),
                                msgs.end());
  }
  return t;
}

}  // namespace masqkd
