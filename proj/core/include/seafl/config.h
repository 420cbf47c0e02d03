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

#ifndef SEAFL_CONFIG_H_
#define SEAFL_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "seafl/aggregator.h"
#include "seafl/device.h"
#include "seafl/model.h"

namespace seafl {

enum class PolicyKind { kSeafl, kSeafl2, kFedBuff, kFedAsync, kFedAvg };

std::string ToString(PolicyKind kind);
PolicyKind ParsePolicyKind(const std::string& s);

// Which idle clients receive the fresh global model after an aggregation.
enum class Redispatch {
  kReporters,  // the clients whose updates were just aggregated
  kResample,   // as many clients, drawn uniformly from all idle clients
};

std::string ToString(Redispatch r);
Redispatch ParseRedispatch(const std::string& s);

enum class DataSource { kSynthetic, kIdx };

std::string ToString(DataSource s);
DataSource ParseDataSource(const std::string& s);

struct PolicyConfig {
  PolicyKind kind = PolicyKind::kSeafl;
  SeaflHyper hyper;
  double fedasync_mixing = 0.5;
  Redispatch redispatch = Redispatch::kReporters;

  bool operator==(const PolicyConfig&) const = default;
};

struct DataConfig {
  DataSource source = DataSource::kSynthetic;
  int num_classes = 10;
  std::size_t dim = 20;
  std::size_t num_samples = 6000;  // before the test split
  double class_sep = 1.0;
  std::string idx_images;
  std::string idx_labels;
  std::size_t idx_limit = 0;  // 0 reads every record
  double concentration = 0.3;
  double test_fraction = 0.1;

  bool operator==(const DataConfig&) const = default;
};

struct RunConfig {
  std::size_t num_clients = 100;
  std::size_t concurrency = 0;  // 0 selects ceil(0.2 * num_clients)
  PolicyConfig policy;
  ModelKind model = ModelKind::kLogistic;
  std::size_t hidden_dim = 0;
  int epochs = 5;
  double learning_rate = 0.05;
  std::size_t batch_size = 16;
  DataConfig data;
  SpeedModel speed;
  double link_latency = 0.0;          // seconds added to each upload
  double notification_latency = 0.0;  // seconds for a notification to land
  std::optional<double> target_accuracy;
  double max_virtual_time = 3600.0;
  int max_rounds = 100000;
  std::uint64_t seed = 1;
  bool stop_at_target = false;
  bool drain = false;  // finish in-flight uploads after the stop condition
  std::size_t workers = 1;

  std::size_t EffectiveConcurrency() const;
  // Effective buffer size: 1 for FedAsync, M for FedAvg, K otherwise.
  std::size_t EffectiveBufferSize() const;
  void Validate() const;

  bool operator==(const RunConfig&) const = default;
};

// Assigns one key (see ConfigKeys()) from its textual form. Throws
// ConfigError on unknown keys or unparsable values.
void SetConfigValue(RunConfig& config, const std::string& key,
                    const std::string& value);
std::string GetConfigValue(const RunConfig& config, const std::string& key);

// All recognised keys as (section, key) pairs, in a stable order.
struct ConfigKey {
  std::string section;
  std::string key;
};
const std::vector<ConfigKey>& ConfigKeys();

// INI-style text: [section] headers, key = value lines, '#' or ';'
// comments. Keys are unique across sections; the section a key appears in is
// not significant. target_accuracy is mandatory.
RunConfig ParseConfig(const std::string& text);
RunConfig LoadConfig(const std::filesystem::path& path);

// Round-trippable JSON echo, grouped by section.
std::string ConfigToJson(const RunConfig& config, int indent = 2);
RunConfig ConfigFromJson(const std::string& json_text);

}  // namespace seafl

#endif  // SEAFL_CONFIG_H_
