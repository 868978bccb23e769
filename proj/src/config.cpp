/*
 * This code is part of the masqkd simulator.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "masqkd/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace masqkd {

namespace {

cplx parse_cplx(const ordered_json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number()) {
    throw ConfigError(where + ": complex values must be [re, im]");
  }
  return cplx(j[0].get<double>(), j[1].get<double>());
}

template <std::size_t N>
std::array<cplx, N> parse_cvec(const ordered_json& j,
                               const std::string& where) {
  if (!j.is_array() || j.size() != N) {
    std::ostringstream msg;
    msg << where << ": expected " << N << " complex entries";
    throw ConfigError(msg.str());
  }
  std::array<cplx, N> out;
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = parse_cplx(j[i], where);
  }
  return out;
}

template <std::size_t N>
ordered_json emit_cvec(const std::array<cplx, N>& v) {
  ordered_json out = ordered_json::array();
  for (const cplx& c : v) {
    out.push_back(ordered_json::array({c.real(), c.imag()}));
  }
  return out;
}

std::string_view attack_kind_name(AttackKind k) {
  switch (k) {
    case AttackKind::None:
      return "none";
    case AttackKind::InterceptResend:
      return "intercept_resend";
    case AttackKind::CollectiveS1:
      return "collective_s1";
    case AttackKind::CollectiveS2:
      return "collective_s2";
  }
  throw std::logic_error("unreachable");
}

std::string_view leg_name(ChannelLeg l) {
  switch (l) {
    case ChannelLeg::TPtoAlice:
      return "tp_to_alice";
    case ChannelLeg::AliceToBob:
      return "alice_to_bob";
    case ChannelLeg::BobToTP:
      return "bob_to_tp";
  }
  throw std::logic_error("unreachable");
}

ChannelLeg leg_from_string(const std::string& s) {
  if (s == "tp_to_alice") return ChannelLeg::TPtoAlice;
  if (s == "alice_to_bob") return ChannelLeg::AliceToBob;
  if (s == "bob_to_tp") return ChannelLeg::BobToTP;
  throw ConfigError("unknown attack location: " + s);
}

}  // namespace

std::string_view to_string(EfficiencyConvention c) {
  return c == EfficiencyConvention::RawOverPrepared ? "raw_over_prepared"
                                                    : "final_over_prepared";
}

EfficiencyConvention efficiency_convention_from_string(std::string_view s) {
  if (s == "raw_over_prepared") return EfficiencyConvention::RawOverPrepared;
  if (s == "final_over_prepared")
    return EfficiencyConvention::FinalOverPrepared;
  throw ConfigError("unknown efficiency convention: " + std::string(s));
}

AttackModel parse_attack(const ordered_json& doc) {
  if (doc.is_null()) {
    return AttackModel{};
  }
  if (!doc.is_object()) {
    throw ConfigError("attack: expected an object or null");
  }
  AttackModel attack;
  const std::string kind = doc.value("kind", std::string("none"));
  if (doc.contains("location")) {
    attack.location = leg_from_string(doc.at("location").get<std::string>());
  }
  const ordered_json params =
      doc.contains("params") ? doc.at("params") : ordered_json::object();

  if (kind == "none") {
    attack.kind = AttackKind::None;
  } else if (kind == "intercept_resend") {
    attack.kind = AttackKind::InterceptResend;
    const std::string basis = params.value("basis", std::string("Z"));
    if (basis == "Z") {
      attack.ir_basis = MeasBasisKind::Z;
    } else if (basis == "X") {
      attack.ir_basis = MeasBasisKind::X;
    } else {
      throw ConfigError("attack.params.basis must be Z or X");
    }
  } else if (kind == "collective_s1") {
    attack.kind = AttackKind::CollectiveS1;
    if (params.contains("theta")) {
      const double theta = params.at("theta").get<double>();
      attack.u = {cplx(std::cos(theta), 0.0), cplx(0.0, 0.0)};
      attack.w = {cplx(0.0, 0.0), cplx(std::sin(theta), 0.0)};
    } else {
      attack.u = parse_cvec<2>(params.at("u"), "attack.params.u");
      attack.w = parse_cvec<2>(params.at("w"), "attack.params.w");
    }
  } else if (kind == "collective_s2") {
    attack.kind = AttackKind::CollectiveS2;
    if (params.contains("undetectable")) {
      const ordered_json& und = params.at("undetectable");
      const auto v0 = parse_cvec<4>(und.at("v0"), "attack.undetectable.v0");
      const auto v1 = parse_cvec<4>(und.at("v1"), "attack.undetectable.v1");
      try {
        return make_undetectable_s2(v0, v1, attack.location);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
    attack.v0 = parse_cvec<4>(params.at("v0"), "attack.params.v0");
    attack.v1 = parse_cvec<4>(params.at("v1"), "attack.params.v1");
    attack.w0 = parse_cvec<4>(params.at("w0"), "attack.params.w0");
    attack.w1 = parse_cvec<4>(params.at("w1"), "attack.params.w1");
  } else {
    throw ConfigError("unknown attack kind: " + kind);
  }
  return attack;
}

ordered_json emit_attack(const AttackModel& attack) {
  if (attack.kind == AttackKind::None) {
    return nullptr;
  }
  ordered_json out;
  out["kind"] = attack_kind_name(attack.kind);
  out["location"] = leg_name(attack.location);
  ordered_json params = ordered_json::object();
  switch (attack.kind) {
    case AttackKind::InterceptResend:
      params["basis"] = attack.ir_basis == MeasBasisKind::Z ? "Z" : "X";
      break;
    case AttackKind::CollectiveS1:
      params["u"] = emit_cvec(attack.u);
      params["w"] = emit_cvec(attack.w);
      break;
    case AttackKind::CollectiveS2:
      params["v0"] = emit_cvec(attack.v0);
      params["v1"] = emit_cvec(attack.v1);
      params["w0"] = emit_cvec(attack.w0);
      params["w1"] = emit_cvec(attack.w1);
      break;
    case AttackKind::None:
      break;
  }
  out["params"] = params;
  return out;
}

ExperimentConfig parse_config(const ordered_json& doc) {
  if (!doc.is_object()) {
    throw ConfigError("config: expected a JSON object");
  }
  ExperimentConfig cfg;
  try {
    cfg.protocol = protocol_kind_from_string(
        doc.value("protocol", std::string("base")));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!doc.contains("n")) {
    throw ConfigError("config: missing required field n");
  }
  const ordered_json& n_field = doc.at("n");
  const bool n_ok =
      n_field.is_number_integer() &&
      (n_field.is_number_unsigned() ? n_field.get<std::uint64_t>() >= 1
                                    : n_field.get<std::int64_t>() >= 1);
  if (!n_ok) {
    throw ConfigError("config: n must be an integer >= 1");
  }
  cfg.n = n_field.get<std::uint64_t>();
  if (doc.contains("seed")) {
    const ordered_json& seed_field = doc.at("seed");
    if (!seed_field.is_number_integer() ||
        (!seed_field.is_number_unsigned() &&
         seed_field.get<std::int64_t>() < 0)) {
      throw ConfigError("config: seed must be a nonnegative integer");
    }
    cfg.seed = seed_field.get<std::uint64_t>();
  }
  cfg.attack = parse_attack(doc.contains("attack") ? doc.at("attack")
                                                   : ordered_json(nullptr));
  cfg.threshold = doc.value("threshold", 0.02);
  cfg.disclosure_fraction = doc.value("disclosure_fraction", 0.5);
  cfg.efficiency_convention = efficiency_convention_from_string(doc.value(
      "efficiency_convention", std::string("final_over_prepared")));
  cfg.output_path = doc.value("output_path", std::string());
  cfg.workers = doc.value("workers", 1);

  std::vector<std::string> problems;
  if (!(std::isfinite(cfg.threshold) && cfg.threshold >= 0.0 &&
        cfg.threshold <= 1.0)) {
    problems.push_back("threshold must lie in [0,1]");
  }
  if (!(std::isfinite(cfg.disclosure_fraction) &&
        cfg.disclosure_fraction >= 0.0 && cfg.disclosure_fraction <= 1.0)) {
    problems.push_back("disclosure_fraction must lie in [0,1]");
  }
  if (cfg.workers < 1) {
    problems.push_back("workers must be >= 1");
  }
  for (const Violation& v : validate_attack(cfg.attack, cfg.protocol)) {
    std::ostringstream msg;
    msg << "attack constraint violated: " << v.constraint << " (residual "
        << v.residual << ")";
    problems.push_back(msg.str());
  }
  if (!problems.empty()) {
    std::string msg = "invalid config:";
    for (const auto& p : problems) {
      msg += "\n  - " + p;
    }
    throw ConfigError(msg);
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(doc);
}

ordered_json emit_config(const ExperimentConfig& cfg) {
  ordered_json out;
  out["protocol"] = to_string(cfg.protocol);
  out["n"] = cfg.n;
  out["seed"] = cfg.seed;
  out["attack"] = emit_attack(cfg.attack);
  out["threshold"] = cfg.threshold;
  out["disclosure_fraction"] = cfg.disclosure_fraction;
  out["efficiency_convention"] = to_string(cfg.efficiency_convention);
  out["output_path"] = cfg.output_path;
  out["workers"] = cfg.workers;
  return out;
}

}  // namespace masqkd
