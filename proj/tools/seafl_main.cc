/*
 * Copyright 2026 The SEAFL Simulator Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end:
//   seafl simulate --config <path> [--seed S] [--out DIR] [--set key=value]...
//   seafl sweep --config <path> --param <key> --values v1,v2 --seeds s1,s2
//               --out DIR [--jobs N]
//   seafl compare --config <path> --policies seafl,fedbuff,... --out DIR
// Log verbosity comes from SEAFL_LOG_LEVEL (trace, debug, info, warn, error).

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "seafl/config.h"
#include "seafl/errors.h"
#include "seafl/experiment.h"
#include "seafl/sim_engine.h"

namespace {

void ApplyOverrides(seafl::RunConfig& config,
                    const std::vector<std::string>& overrides) {
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw seafl::ConfigError("--set expects key=value, got '" + kv + "'");
    }
    seafl::SetConfigValue(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
}

void ConfigureLogging() {
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("SEAFL_LOG_LEVEL")) {
    spdlog::set_level(spdlog::level::from_str(level));
  }
}

}  // namespace

int main(int argc, char** argv) {
  ConfigureLogging();

  CLI::App app{"Semi-asynchronous federated learning simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::string> overrides;

  auto* simulate = app.add_subcommand("simulate", "Run one simulation");
  std::uint64_t seed = 0;
  simulate->add_option("--config", config_path, "Config file")->required();
  auto* seed_opt = simulate->add_option("--seed", seed, "Override the seed");
  simulate->add_option("--out", out_dir, "Output directory");
  simulate->add_option("--set", overrides, "Override a config key (key=value)");

  auto* sweep = app.add_subcommand("sweep", "Grid sweep over one parameter");
  std::string param;
  std::vector<std::string> values;
  std::vector<std::uint64_t> seeds;
  std::size_t jobs = 1;
  sweep->add_option("--config", config_path, "Config file")->required();
  sweep->add_option("--param", param, "Config key to vary")->required();
  sweep->add_option("--values", values, "Comma-separated values")
      ->required()
      ->delimiter(',');
  sweep->add_option("--seeds", seeds, "Comma-separated seeds")
      ->required()
      ->delimiter(',');
  sweep->add_option("--out", out_dir, "Output directory");
  sweep->add_option("--jobs", jobs, "Concurrent runs")->check(CLI::PositiveNumber);
  sweep->add_option("--set", overrides, "Override a config key (key=value)");

  auto* compare = app.add_subcommand("compare", "Run several policies");
  std::vector<std::string> policies;
  compare->add_option("--config", config_path, "Config file")->required();
  compare->add_option("--policies", policies, "Comma-separated policies")
      ->required()
      ->delimiter(',');
  compare->add_option("--out", out_dir, "Output directory");
  compare->add_option("--jobs", jobs, "Concurrent runs")
      ->check(CLI::PositiveNumber);
  compare->add_option("--set", overrides, "Override a config key (key=value)");

  CLI11_PARSE(app, argc, argv);

  try {
    seafl::RunConfig config = seafl::LoadConfig(config_path);
    ApplyOverrides(config, overrides);

    if (simulate->parsed()) {
      if (seed_opt->count() > 0) config.seed = seed;
      config.Validate();
      const seafl::MetricsLog log = seafl::Run(config);
      seafl::EmitRun(config, log, out_dir);
      const auto t = seafl::TimeToAccuracy(log, *config.target_accuracy);
      std::cout << log.policy << ": " << log.stats.aggregations
                << " rounds, final accuracy "
                << log.checkpoints.back().test_accuracy << ", time to target "
                << (t ? std::to_string(*t) + " s" : std::string("not reached"))
                << "\n";
    } else if (sweep->parsed()) {
      config.Validate();
      const auto table = seafl::RunSweep(config, param, values, seeds, jobs);
      seafl::EmitSweep(config, table, out_dir);
      for (const auto& p : table.points) {
        std::cout << param << "=" << p.value << ": median " << p.median_seconds
                  << " s, reached " << p.reached << "/" << p.runs.size()
                  << "\n";
      }
    } else if (compare->parsed()) {
      std::vector<seafl::PolicyKind> kinds;
      for (const auto& p : policies) kinds.push_back(seafl::ParsePolicyKind(p));
      config.Validate();
      const auto logs = seafl::RunComparison(config, kinds, jobs);
      seafl::EmitComparison(config, logs, out_dir);
      for (const auto& log : logs) {
        const auto t = seafl::TimeToAccuracy(log, *config.target_accuracy);
        std::cout << log.policy << ": time to target "
                  << (t ? std::to_string(*t) + " s" : std::string("not reached"))
                  << "\n";
      }
    }
  } catch (const seafl::Error& e) {
    std::cerr << "seafl: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "seafl: unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
