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

#ifndef SEAFL_EXPERIMENT_H_
#define SEAFL_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seafl/config.h"
#include "seafl/metrics.h"

namespace seafl {

// Virtual time of the first checkpoint whose accuracy reaches target.
std::optional<double> TimeToAccuracy(const MetricsLog& log, double target);

// Time to target, or censored at max_virtual_time if never reached.
struct TargetTime {
  double seconds = 0.0;
  bool reached = false;
};
TargetTime CensoredTimeToAccuracy(const MetricsLog& log, double target,
                                  double max_virtual_time);

double Median(std::vector<double> values);

struct SeedResult {
  std::uint64_t seed = 0;
  TargetTime time;
};

struct SweepPoint {
  std::string value;
  std::vector<SeedResult> runs;  // ordered by seed
  double median_seconds = 0.0;
  std::size_t reached = 0;
};

struct SweepTable {
  std::string param;
  double target_accuracy = 0.0;
  std::vector<SweepPoint> points;  // grid order
};

// Runs base with param set to every value, once per seed, and tabulates the
// median censored time to target per grid point. parallel_runs independent
// runs execute concurrently; the table does not depend on it.
SweepTable RunSweep(const RunConfig& base, const std::string& param,
                    std::span<const std::string> values,
                    std::span<const std::uint64_t> seeds,
                    std::size_t parallel_runs = 1);

// One run per policy, all other settings shared.
std::vector<MetricsLog> RunComparison(const RunConfig& base,
                                      std::span<const PolicyKind> policies,
                                      std::size_t parallel_runs = 1);

// Output writers. Each creates out_dir if needed and throws IoError on
// failure.
//   simulate: metrics.csv, weights.csv, curves.csv, summary.json
//   compare:  metrics.csv, curves.csv, summary.json
//   sweep:    sweep.csv, summary.json
void EmitRun(const RunConfig& config, const MetricsLog& log,
             const std::filesystem::path& out_dir);
void EmitComparison(const RunConfig& config, std::span<const MetricsLog> logs,
                    const std::filesystem::path& out_dir);
void EmitSweep(const RunConfig& config, const SweepTable& table,
               const std::filesystem::path& out_dir);

// Recovers the config echoed into a summary.json.
RunConfig ReadSummaryConfig(const std::filesystem::path& summary_path);

}  // namespace seafl

#endif  // SEAFL_EXPERIMENT_H_
