/*
 * This code is part of the masqkd simulator.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef MASQKD_CONFIG_HPP_
#define MASQKD_CONFIG_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "masqkd/attack.hpp"
#include "masqkd/protocol_kind.hpp"

namespace masqkd {

using ordered_json = nlohmann::ordered_json;

/// Which key count enters the qubit-efficiency ratio eta = n_key / m.
enum class EfficiencyConvention { RawOverPrepared, FinalOverPrepared };

std::string_view to_string(EfficiencyConvention c);
EfficiencyConvention efficiency_convention_from_string(std::string_view s);

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One experiment: protocol variant, scale, seed, adversary and
/// post-processing knobs. 8n rounds are simulated per run.
struct ExperimentConfig {
  ProtocolKind protocol = ProtocolKind::Base;
  std::uint64_t n = 1;
  std::uint64_t seed = 0;
  AttackModel attack;  // kind None when absent
  double threshold = 0.02;
  double disclosure_fraction = 0.5;
  EfficiencyConvention efficiency_convention =
      EfficiencyConvention::FinalOverPrepared;
  std::string output_path;
  int workers = 1;

  std::uint64_t rounds() const { return 8 * n; }

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses and validates a config document. Throws ConfigError listing every
/// violated constraint (including attack parameter residuals).
ExperimentConfig parse_config(const ordered_json& doc);
ExperimentConfig load_config(const std::string& path);

/// Inverse of parse_config: parse_config(emit_config(c)) == c.
ordered_json emit_config(const ExperimentConfig& config);

/// Attack objects: {"kind", "location", "params"}; complex entries are
/// [re, im] pairs. Strategy-1 params accept either explicit {"u","w"}
/// vectors or the one-parameter family {"theta": t} meaning
/// u=(cos t, 0), w=(0, sin t). Strategy-2 params accept explicit
/// {"v0","v1","w0","w1"} or {"undetectable": {"v0","v1"}}.
AttackModel parse_attack(const ordered_json& doc);
ordered_json emit_attack(const AttackModel& attack);

}  // namespace masqkd

#endif  // MASQKD_CONFIG_HPP_
