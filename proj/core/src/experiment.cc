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

#include "seafl/experiment.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "seafl/errors.h"
#include "seafl/sim_engine.h"
#include "seafl/worker_pool.h"

namespace seafl {

namespace {

using nlohmann::json;

std::ofstream OpenOut(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  return out;
}

void Finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError(path.string(), "write failed");
}

void EnsureDir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(dir.string(), ec.message());
}

json TimeJson(const std::optional<double>& t) {
  return t ? json(*t) : json(nullptr);
}

json StatsJson(const RunStats& s) {
  return json{{"dispatches", s.dispatches},
              {"uploads", s.uploads},
              {"aggregations", s.aggregations},
              {"aggregated_updates", s.aggregated_updates},
              {"deferrals", s.deferrals},
              {"notifications", s.notifications},
              {"ignored_notifications", s.ignored_notifications},
              {"partial_updates", s.partial_updates},
              {"max_aggregated_staleness", s.max_aggregated_staleness},
              {"max_buffer_size", s.max_buffer_size},
              {"in_flight_at_end", s.in_flight_at_end},
              {"end_time_s", s.end_time}};
}

void WriteJson(const json& j, const std::filesystem::path& path) {
  auto out = OpenOut(path);
  out << j.dump(2) << '\n';
  Finish(out, path);
}

}  // namespace

std::optional<double> TimeToAccuracy(const MetricsLog& log, double target) {
  for (const auto& c : log.checkpoints) {
    if (c.test_accuracy >= target) return c.virtual_time;
  }
  return std::nullopt;
}

TargetTime CensoredTimeToAccuracy(const MetricsLog& log, double target,
                                  double max_virtual_time) {
  if (auto t = TimeToAccuracy(log, target)) return {*t, true};
  return {max_virtual_time, false};
}

double Median(std::vector<double> values) {
  if (values.empty()) throw DataError("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

SweepTable RunSweep(const RunConfig& base, const std::string& param,
                    std::span<const std::string> values,
                    std::span<const std::uint64_t> seeds,
                    std::size_t parallel_runs) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  if (seeds.empty()) throw ConfigError("sweep needs at least one seed");
  std::vector<std::uint64_t> ordered(seeds.begin(), seeds.end());
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());

  struct Job {
    std::size_t point;
    std::size_t seed_index;
    RunConfig config;
  };
  std::vector<Job> jobs;
  for (std::size_t p = 0; p < values.size(); ++p) {
    for (std::size_t s = 0; s < ordered.size(); ++s) {
      RunConfig c = base;
      try {
        SetConfigValue(c, param, values[p]);
        c.seed = ordered[s];
        c.Validate();
      } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("sweep {}={} seed {}: {}", param,
                                      values[p], ordered[s], e.what()));
      }
      jobs.push_back(Job{p, s, std::move(c)});
    }
  }

  std::vector<TargetTime> results(jobs.size());
  ParallelFor(parallel_runs, jobs.size(), [&](std::size_t j) {
    const RunConfig& c = jobs[j].config;
    const MetricsLog log = Run(c);
    results[j] =
        CensoredTimeToAccuracy(log, *c.target_accuracy, c.max_virtual_time);
  });

  SweepTable table;
  table.param = param;
  table.target_accuracy = base.target_accuracy.value_or(0.0);
  table.points.resize(values.size());
  for (std::size_t p = 0; p < values.size(); ++p) {
    table.points[p].value = values[p];
  }
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    auto& point = table.points[jobs[j].point];
    point.runs.push_back(SeedResult{ordered[jobs[j].seed_index], results[j]});
  }
  for (auto& point : table.points) {
    std::vector<double> times;
    for (const auto& r : point.runs) {
      times.push_back(r.time.seconds);
      if (r.time.reached) ++point.reached;
    }
    point.median_seconds = Median(times);
  }
  return table;
}

std::vector<MetricsLog> RunComparison(const RunConfig& base,
                                      std::span<const PolicyKind> policies,
                                      std::size_t parallel_runs) {
  if (policies.empty()) throw ConfigError("compare needs at least one policy");
  std::vector<RunConfig> configs;
  for (PolicyKind p : policies) {
    RunConfig c = base;
    c.policy.kind = p;
    try {
      c.Validate();
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("policy {}: {}", ToString(p), e.what()));
    }
    configs.push_back(std::move(c));
  }
  const SimEnvironment env = BuildEnvironment(configs.front());
  std::vector<std::optional<MetricsLog>> logs(configs.size());
  ParallelFor(parallel_runs, configs.size(),
              [&](std::size_t i) { logs[i] = Run(configs[i], env); });
  std::vector<MetricsLog> out;
  for (auto& l : logs) out.push_back(std::move(*l));
  return out;
}

void EmitRun(const RunConfig& config, const MetricsLog& log,
             const std::filesystem::path& out_dir) {
  EnsureDir(out_dir);
  {
    const auto path = out_dir / "metrics.csv";
    auto out = OpenOut(path);
    WriteMetricsCsv(log, out);
    Finish(out, path);
  }
  {
    const auto path = out_dir / "weights.csv";
    auto out = OpenOut(path);
    WriteWeightsCsv(log, out);
    Finish(out, path);
  }
  {
    const auto path = out_dir / "curves.csv";
    auto out = OpenOut(path);
    WriteCurvesCsv(std::span<const MetricsLog>(&log, 1), out);
    Finish(out, path);
  }
  const double target = config.target_accuracy.value_or(0.0);
  json summary{
      {"config", json::parse(ConfigToJson(config))},
      {"seed", config.seed},
      {"policy", log.policy},
      {"target_accuracy", target},
      {"time_to_target", {{log.policy, TimeJson(TimeToAccuracy(log, target))}}},
      {"rounds", log.stats.aggregations},
      {"stats", StatsJson(log.stats)},
  };
  WriteJson(summary, out_dir / "summary.json");
}

void EmitComparison(const RunConfig& config, std::span<const MetricsLog> logs,
                    const std::filesystem::path& out_dir) {
  EnsureDir(out_dir);
  {
    const auto path = out_dir / "metrics.csv";
    auto out = OpenOut(path);
    WriteMetricsCsvHeader(out);
    for (const auto& log : logs) WriteMetricsCsvRows(log, out);
    Finish(out, path);
  }
  {
    const auto path = out_dir / "curves.csv";
    auto out = OpenOut(path);
    WriteCurvesCsv(logs, out);
    Finish(out, path);
  }
  const double target = config.target_accuracy.value_or(0.0);
  json times = json::object();
  json stats = json::object();
  for (const auto& log : logs) {
    times[log.policy] = TimeJson(TimeToAccuracy(log, target));
    stats[log.policy] = StatsJson(log.stats);
  }
  json summary{{"config", json::parse(ConfigToJson(config))},
               {"seed", config.seed},
               {"target_accuracy", target},
               {"time_to_target", times},
               {"stats", stats}};
  WriteJson(summary, out_dir / "summary.json");
}

void EmitSweep(const RunConfig& config, const SweepTable& table,
               const std::filesystem::path& out_dir) {
  EnsureDir(out_dir);
  const auto path = out_dir / "sweep.csv";
  auto out = OpenOut(path);
  out << "param,value,median_time_s,reached,runs\n";
  json points = json::array();
  for (const auto& p : table.points) {
    out << fmt::format("{},{},{},{},{}\n", table.param, p.value,
                       p.median_seconds, p.reached, p.runs.size());
    json runs = json::array();
    for (const auto& r : p.runs) {
      runs.push_back({{"seed", r.seed},
                      {"time_s", r.time.seconds},
                      {"reached", r.time.reached}});
    }
    points.push_back({{"value", p.value},
                      {"median_time_s", p.median_seconds},
                      {"reached", p.reached},
                      {"runs", runs}});
  }
  Finish(out, path);
  json summary{{"config", json::parse(ConfigToJson(config))},
               {"param", table.param},
               {"target_accuracy", table.target_accuracy},
               {"points", points}};
  WriteJson(summary, out_dir / "summary.json");
}

RunConfig ReadSummaryConfig(const std::filesystem::path& summary_path) {
  std::ifstream in(summary_path);
  if (!in) throw IoError(summary_path.string(), "cannot open summary");
  std::stringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::exception& e) {
    throw FormatError(summary_path.string() + ": " + e.what());
  }
  if (!j.contains("config")) {
    throw FormatError(summary_path.string() + ": no config echo");
  }
  return ConfigFromJson(j["config"].dump());
}

}  // namespace seafl
