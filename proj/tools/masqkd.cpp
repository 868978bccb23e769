/*
 * This code is part of the masqkd simulator.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "masqkd/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAborted = 1;
constexpr int kExitConfigError = 2;

/// Seed precedence: --seed flag > MASQKD_SEED env > config file.
std::optional<std::uint64_t> env_seed() {
  const char* env = std::getenv("MASQKD_SEED");
  if (env == nullptr || *env == '\0') {
    return std::nullopt;
  }
  char* end = nullptr;
  const std::uint64_t value = std::strtoull(env, &end, 10);
  if (end == nullptr || *end != '\0') {
    throw masqkd::ConfigError(std::string("MASQKD_SEED is not an integer: ") +
                              env);
  }
  return value;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw masqkd::ConfigError("cannot open output file: " + out_path);
  }
  out << text;
}

std::vector<masqkd::ordered_json> parse_grid(const std::string& csv) {
  std::vector<masqkd::ordered_json> grid;
  std::string token;
  std::istringstream in(csv);
  while (std::getline(in, token, ',')) {
    try {
      grid.push_back(masqkd::ordered_json::parse(token));
    } catch (const nlohmann::json::parse_error&) {
      throw masqkd::ConfigError("grid value is not a JSON scalar: " + token);
    }
  }
  return grid;
}

masqkd::ordered_json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw masqkd::ConfigError("cannot open file: " + path);
  }
  try {
    return masqkd::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw masqkd::ConfigError(std::string("parse error: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"masqkd protocol simulator and analysis harness"};
  app.require_subcommand(1);

  // run
  std::string run_config_path, run_out;
  std::optional<std::uint64_t> run_seed;
  std::optional<int> run_workers;
  bool exit_zero_on_abort = false;
  CLI::App* run = app.add_subcommand("run", "run one experiment");
  run->add_option("config", run_config_path, "config JSON file")->required();
  run->add_option("--out", run_out, "report output path (default: stdout)");
  run->add_option("--seed", run_seed, "override the run seed");
  run->add_option("--workers", run_workers, "parallel round workers");
  run->add_flag("--exit-zero-on-abort", exit_zero_on_abort,
                "return 0 even when the run aborts");

  // sweep
  std::string sweep_config_path, sweep_param, sweep_grid, sweep_out;
  std::optional<std::uint64_t> sweep_seed;
  CLI::App* sweep = app.add_subcommand("sweep", "sweep one scalar parameter");
  sweep->add_option("config", sweep_config_path, "config JSON file")
      ->required();
  sweep->add_option("--param", sweep_param,
                    "dotted path, e.g. attack.params.theta")
      ->required();
  sweep->add_option("--grid", sweep_grid, "comma-separated values")
      ->required();
  sweep->add_option("--out", sweep_out, "CSV output path (default: stdout)");
  sweep->add_option("--seed", sweep_seed, "override the run seed");

  // compare
  std::uint64_t cmp_n = 2000, cmp_seed = 0;
  std::string cmp_out;
  CLI::App* compare =
      app.add_subcommand("compare", "honest efficiency comparison table");
  compare->add_option("--n", cmp_n, "rounds = 8n per protocol")->required();
  compare->add_option("--seed", cmp_seed, "run seed");
  compare->add_option("--out", cmp_out, "CSV output path (default: stdout)");

  // attack-check
  std::string chk_path, chk_protocol = "base", chk_out;
  CLI::App* check = app.add_subcommand(
      "attack-check", "validate an attack parameter file");
  check->add_option("attack", chk_path, "attack JSON file")->required();
  check->add_option("--protocol", chk_protocol,
                    "protocol to validate against (default: base)");
  check->add_option("--out", chk_out, "verdict output path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      masqkd::ExperimentConfig config =
          masqkd::load_config(run_config_path);
      if (const auto seed = env_seed()) config.seed = *seed;
      if (run_seed) config.seed = *run_seed;
      if (run_workers) config.workers = *run_workers;
      if (config.workers < 1) {
        throw masqkd::ConfigError("workers must be >= 1");
      }
      const masqkd::ExperimentResult result = masqkd::run_experiment(config);
      const std::string text = result.report.dump(2) + "\n";
      const std::string out_path =
          !run_out.empty() ? run_out : config.output_path;
      write_output(text, out_path);
      if (!out_path.empty()) {
        std::cout << "report written to " << out_path
                  << (result.aborted ? " (run aborted)" : "") << "\n";
      }
      return result.aborted && !exit_zero_on_abort ? kExitAborted : kExitOk;
    }

    if (*sweep) {
      masqkd::ordered_json doc = load_json(sweep_config_path);
      if (const auto seed = env_seed()) doc["seed"] = *seed;
      if (sweep_seed) doc["seed"] = *sweep_seed;
      const std::string csv =
          masqkd::sweep_csv(doc, sweep_param, parse_grid(sweep_grid));
      write_output(csv, sweep_out);
      return kExitOk;
    }

    if (*compare) {
      if (const auto seed = env_seed()) cmp_seed = *seed;
      write_output(masqkd::compare_protocols_csv(cmp_n, cmp_seed), cmp_out);
      return kExitOk;
    }

    if (*check) {
      const masqkd::ordered_json doc = load_json(chk_path);
      const masqkd::ProtocolKind kind = masqkd::protocol_kind_from_string(
          doc.contains("protocol") ? doc.at("protocol").get<std::string>()
                                   : chk_protocol);
      const masqkd::AttackModel attack = masqkd::parse_attack(doc);
      const auto violations = masqkd::validate_attack(attack, kind);
      masqkd::ordered_json verdict;
      verdict["protocol"] = masqkd::to_string(kind);
      verdict["valid"] = violations.empty();
      verdict["violations"] = masqkd::ordered_json::array();
      for (const auto& v : violations) {
        verdict["violations"].push_back(
            {{"constraint", v.constraint}, {"residual", v.residual}});
      }
      write_output(verdict.dump(2) + "\n", chk_out);
      return violations.empty() ? kExitOk : kExitConfigError;
    }
  } catch (const masqkd::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitOk;
}
