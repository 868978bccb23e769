/*
 * This code is part of the masqkd simulator.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef MASQKD_EXPERIMENT_HPP_
#define MASQKD_EXPERIMENT_HPP_

#include <string>
#include <vector>

#include "masqkd/config.hpp"
#include "masqkd/postprocess.hpp"
#include "masqkd/protocol.hpp"

namespace masqkd {

struct ExperimentResult {
  ordered_json report;  // fixed key order; wall_time_ms is the only
                        // rerun-dependent field
  bool aborted = false;
};

/// Runs the protocol, postprocessing and adversary analytics for one config.
/// Everything but the wall_time_ms field is deterministic in (config, seed),
/// independent of worker count.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Sets the dotted `path` (e.g. "attack.params.theta") in each copy of
/// `base_doc` to one grid value, revalidates, runs, and emits one CSV row
/// per grid value. The column set is fixed. Throws ConfigError if the path
/// does not resolve to an existing scalar.
std::string sweep_csv(const ordered_json& base_doc, const std::string& path,
                      const std::vector<ordered_json>& grid);

/// Honest runs of all three protocol variants at the same n and seed, with
/// measured efficiency under both counting conventions next to the
/// published figures (the non-simulated reference protocol appears with its
/// published value only).
std::string compare_protocols_csv(std::uint64_t n, std::uint64_t seed);

/// The adversary's single-bit information used for the default privacy
/// amplification length: Holevo bound for collective attacks, 1 bit for a
/// Z-basis intercept (Eve holds the resent bit exactly), else 0.
double eve_info_bits(const AttackModel& attack, ProtocolKind kind);

}  // namespace masqkd

#endif  // MASQKD_EXPERIMENT_HPP_
