/*
 * This code is part of the masqkd simulator.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "masqkd/experiment.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace masqkd {

namespace {

struct EveStats {
  ordered_json holevo = nullptr;
  ordered_json helstrom = nullptr;
  ordered_json guess_accuracy = nullptr;
};

EveStats eve_stats(const Transcript& transcript) {
  const AttackModel& attack = transcript.config.attack;
  EveStats stats;
  if (attack.kind == AttackKind::CollectiveS1 ||
      attack.kind == AttackKind::CollectiveS2) {
    const EveConditionals cond =
        eve_conditional_states(attack, transcript.config.protocol);
    stats.holevo = holevo_info(cond.rho_given_0, cond.rho_given_1, cond.p0);
    stats.helstrom =
        helstrom_success(cond.rho_given_0, cond.rho_given_1, cond.p0);
  }
  if (attack.kind != AttackKind::None) {
    std::uint64_t scored = 0, correct = 0;
    for (const RoundRecord& r : transcript.rounds) {
      if (r.eve && r.eve->eve_guess && r.eve->target_bit) {
        ++scored;
        if (*r.eve->eve_guess == *r.eve->target_bit) ++correct;
      }
    }
    if (scored > 0) {
      stats.guess_accuracy =
          static_cast<double>(correct) / static_cast<double>(scored);
    }
  }
  return stats;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) {
    return field;
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string row;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) row += ',';
    row += csv_escape(fields[i]);
  }
  row += "\r\n";
  return row;
}

std::string num(const ordered_json& j) {
  return j.is_null() ? std::string("") : j.dump();
}

}  // namespace

double eve_info_bits(const AttackModel& attack, ProtocolKind kind) {
  switch (attack.kind) {
    case AttackKind::None:
      return 0.0;
    case AttackKind::InterceptResend:
      return attack.ir_basis == MeasBasisKind::Z ? 1.0 : 0.0;
    case AttackKind::CollectiveS1:
    case AttackKind::CollectiveS2: {
      const EveConditionals cond = eve_conditional_states(attack, kind);
      return holevo_info(cond.rho_given_0, cond.rho_given_1, cond.p0);
    }
  }
  throw std::logic_error("unreachable");
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();

  const Transcript transcript = run_protocol(config);
  const SiftedKey sifted = sift(transcript);
  const CheckReport check = estimate_and_decide(transcript, config.threshold);
  const KeyCandidates candidates = key_candidates(transcript);
  const std::vector<int> source = final_key_source(candidates, check);

  const double eve_bits = eve_info_bits(config.attack, config.protocol);
  const double qber = std::min(check.qber_estimate(), 0.5);
  const double rate = key_rate_estimate(qber, eve_bits);
  const std::size_t out_len = static_cast<std::size_t>(
      std::floor(static_cast<double>(source.size()) * rate));
  const KeyMaterial key = privacy_amplification(source, out_len, config.seed);

  const EfficiencyReport eff_raw = qubit_efficiency(
      transcript, check, EfficiencyConvention::RawOverPrepared);
  const EfficiencyReport eff_final = qubit_efficiency(
      transcript, check, EfficiencyConvention::FinalOverPrepared);
  const EfficiencyReport& eff_selected =
      config.efficiency_convention == EfficiencyConvention::RawOverPrepared
          ? eff_raw
          : eff_final;

  std::uint64_t case_counts[3] = {0, 0, 0};
  for (const RoundRecord& r : transcript.rounds) {
    ++case_counts[static_cast<int>(r.round_case)];
  }

  const EveStats eve = eve_stats(transcript);

  ordered_json report;
  // The echo omits the worker count: it is an execution knob with no effect
  // on any result field, and reports must be identical across schedules.
  ordered_json config_echo = emit_config(config);
  config_echo.erase("workers");
  report["config"] = config_echo;
  report["rounds_total"] = transcript.config.rounds();
  report["case_counts"] = {
      {"case1", case_counts[0]},
      {"case2", case_counts[1]},
      {"case3", case_counts[2]},
  };
  report["case1"] = {
      {"rounds", check.case1_rounds},
      {"errors", check.case1_errors},
      {"error_rate", check.case1_error_rate
                         ? ordered_json(*check.case1_error_rate)
                         : ordered_json(nullptr)},
  };
  report["case2"] = {
      {"candidates", candidates.rounds.size()},
      {"true_mismatches", check.case2_mismatch_count},
      {"disclosed", check.disclosed_count},
      {"discovered_mismatches", check.discovered_mismatch_count},
      {"qber_estimate", check.qber_estimate()},
  };
  report["sifted_len"] = sifted.bits.size();
  report["final_key"] = {
      {"len", key.bits.size()},
      {"digest", key_digest(key.bits)},
  };
  report["efficiency"] = {
      {"m_prepared", eff_raw.prepared_total},
      {"eta_raw_over_prepared", eff_raw.eta},
      {"eta_final_over_prepared", eff_final.eta},
      {"convention", std::string(to_string(config.efficiency_convention))},
      {"eta", eff_selected.eta},
  };
  report["key_rate_estimate"] = rate;
  report["eve"] = {
      {"predicted_case1_error",
       predicted_case1_error(config.attack, config.protocol)},
      {"assumed_info_bits", eve_bits},
      {"holevo_bits", eve.holevo},
      {"helstrom_success", eve.helstrom},
      {"guess_accuracy", eve.guess_accuracy},
  };
  report["threshold"] = config.threshold;
  report["abort"] = check.abort;

  const auto t1 = std::chrono::steady_clock::now();
  report["wall_time_ms"] =
      std::chrono::duration<double, std::milli>(t1 - t0).count();

  return ExperimentResult{std::move(report), check.abort};
}

std::string sweep_csv(const ordered_json& base_doc, const std::string& path,
                      const std::vector<ordered_json>& grid) {
  static const std::vector<std::string> columns = {
      "param",
      "value",
      "protocol",
      "n",
      "seed",
      "case1_rounds",
      "case1_errors",
      "case1_error_rate",
      "predicted_case1_error",
      "case2_candidates",
      "case2_true_mismatches",
      "disclosed",
      "discovered_mismatches",
      "sifted_len",
      "final_key_len",
      "key_rate_estimate",
      "holevo_bits",
      "helstrom_success",
      "eve_guess_accuracy",
      "eta_raw_over_prepared",
      "eta_final_over_prepared",
      "abort",
  };
  std::string out = csv_row(columns);

  for (const ordered_json& value : grid) {
    ordered_json doc = base_doc;
    // Resolve the dotted path; every component must already exist so typos
    // fail loudly instead of silently adding unread keys.
    ordered_json* node = &doc;
    std::istringstream segments(path);
    std::string segment;
    std::vector<std::string> parts;
    while (std::getline(segments, segment, '.')) {
      parts.push_back(segment);
    }
    if (parts.empty()) {
      throw ConfigError("sweep: empty parameter path");
    }
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
      if (!node->is_object() || !node->contains(parts[i])) {
        throw ConfigError("sweep: path does not resolve: " + path);
      }
      node = &(*node)[parts[i]];
    }
    if (!node->is_object() || !node->contains(parts.back()) ||
        !(*node)[parts.back()].is_primitive()) {
      throw ConfigError("sweep: path does not resolve to a scalar: " + path);
    }
    (*node)[parts.back()] = value;

    const ExperimentConfig config = parse_config(doc);
    const ExperimentResult result = run_experiment(config);
    const ordered_json& r = result.report;

    out += csv_row({
        path,
        value.dump(),
        r["config"]["protocol"].get<std::string>(),
        num(r["config"]["n"]),
        num(r["config"]["seed"]),
        num(r["case1"]["rounds"]),
        num(r["case1"]["errors"]),
        num(r["case1"]["error_rate"]),
        num(r["eve"]["predicted_case1_error"]),
        num(r["case2"]["candidates"]),
        num(r["case2"]["true_mismatches"]),
        num(r["case2"]["disclosed"]),
        num(r["case2"]["discovered_mismatches"]),
        num(r["sifted_len"]),
        num(r["final_key"]["len"]),
        num(r["key_rate_estimate"]),
        num(r["eve"]["holevo_bits"]),
        num(r["eve"]["helstrom_success"]),
        num(r["eve"]["guess_accuracy"]),
        num(r["efficiency"]["eta_raw_over_prepared"]),
        num(r["efficiency"]["eta_final_over_prepared"]),
        result.aborted ? "true" : "false",
    });
  }
  return out;
}

std::string compare_protocols_csv(std::uint64_t n, std::uint64_t seed) {
  static const std::vector<std::string> columns = {
      "protocol",
      "m_prepared",
      "sifted_len",
      "final_key_len",
      "eta_raw_over_prepared",
      "eta_final_over_prepared",
      "published_eta",
      "published_eta_convention",
  };
  std::string out = csv_row(columns);

  struct Row {
    ProtocolKind kind;
    const char* published;
    const char* published_convention;
  };
  const Row rows[] = {
      {ProtocolKind::Base, "1/12", "final_over_prepared"},
      {ProtocolKind::Improved, "", ""},
      {ProtocolKind::KrawecRef, "1/24", "raw_over_prepared"},
  };
  for (const Row& row : rows) {
    ExperimentConfig config;
    config.protocol = row.kind;
    config.n = n;
    config.seed = seed;
    const ExperimentResult result = run_experiment(config);
    const ordered_json& r = result.report;
    out += csv_row({
        std::string(to_string(row.kind)),
        num(r["efficiency"]["m_prepared"]),
        num(r["sifted_len"]),
        num(r["final_key"]["len"]),
        num(r["efficiency"]["eta_raw_over_prepared"]),
        num(r["efficiency"]["eta_final_over_prepared"]),
        row.published,
        row.published_convention,
    });
  }
  // Published reference only; that protocol is not simulated here.
  out += csv_row({"liu_et_al", "not-simulated", "not-simulated",
                  "not-simulated", "not-simulated", "not-simulated", "1/8",
                  "published-only"});
  return out;
}

}  // namespace masqkd
