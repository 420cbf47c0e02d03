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

#include "seafl/config.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "json.hpp"
#include "seafl/errors.h"

namespace seafl {

namespace {

using nlohmann::json;

enum class ValueType { kUnsigned, kInt, kDouble, kBool, kString, kStaleness,
                       kOptionalDouble };

struct KeyEntry {
  std::string section;
  std::string key;
  ValueType type;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <typename T>
T ParseInteger(const std::string& key, const std::string& raw) {
  const std::string v = Trim(raw);
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError(fmt::format("{}: expected an integer, got '{}'", key, raw));
  }
  return out;
}

double ParseDouble(const std::string& key, const std::string& raw) {
  const std::string v = Trim(raw);
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty() ||
      !std::isfinite(out)) {
    throw ConfigError(fmt::format("{}: expected a finite number, got '{}'", key,
                                  raw));
  }
  return out;
}

bool ParseBool(const std::string& key, const std::string& raw) {
  const std::string v = Trim(raw);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(fmt::format("{}: expected a boolean, got '{}'", key, raw));
}

std::string FormatDouble(double v) { return fmt::format("{}", v); }

#define SEAFL_UNSIGNED(SECTION, NAME, FIELD)                                 KeyEntry {                                                                   SECTION, NAME, ValueType::kUnsigned,                                           [](const RunConfig& c) { return std::to_string(c.FIELD); },                [](RunConfig& c, const std::string& v) {                                     c.FIELD = ParseInteger<decltype(c.FIELD)>(NAME, v);                      }                                                                    }
#define SEAFL_INT(SECTION, NAME, FIELD)                                      KeyEntry {                                                                   SECTION, NAME, ValueType::kInt,                                                [](const RunConfig& c) { return std::to_string(c.FIELD); },                [](RunConfig& c, const std::string& v) {                                     c.FIELD = ParseInteger<int>(NAME, v);                                    }                                                                    }
#define SEAFL_DOUBLE(SECTION, NAME, FIELD)                                   KeyEntry {                                                                   SECTION, NAME, ValueType::kDouble,                                             [](const RunConfig& c) { return FormatDouble(c.FIELD); },                  [](RunConfig& c, const std::string& v) {                                     c.FIELD = ParseDouble(NAME, v);                                          }                                                                    }
#define SEAFL_BOOL(SECTION, NAME, FIELD)                                     KeyEntry {                                                                   SECTION, NAME, ValueType::kBool,                                               [](const RunConfig& c) {                                                     return std::string(c.FIELD ? "true" : "false");                          },                                                                         [](RunConfig& c, const std::string& v) {                                     c.FIELD = ParseBool(NAME, v);                                            }                                                                    }
#define SEAFL_ENUM(SECTION, NAME, FIELD, PARSE)                              KeyEntry {                                                                   SECTION, NAME, ValueType::kString,                                             [](const RunConfig& c) { return ToString(c.FIELD); },                      [](RunConfig& c, const std::string& v) { c.FIELD = PARSE(Trim(v)); }   }
#define SEAFL_STRING(SECTION, NAME, FIELD)                                   KeyEntry {                                                                   SECTION, NAME, ValueType::kString,                                             [](const RunConfig& c) { return c.FIELD; },                                [](RunConfig& c, const std::string& v) { c.FIELD = Trim(v); }        }

const std::vector<KeyEntry>& Registry() {
  static const std::vector<KeyEntry> entries = {
      SEAFL_UNSIGNED("run", "num_clients", num_clients),
      SEAFL_UNSIGNED("run", "concurrency", concurrency),
      SEAFL_UNSIGNED("run", "seed", seed),
      KeyEntry{"run", "target_accuracy", ValueType::kOptionalDouble,
               [](const RunConfig& c) {
                 return c.target_accuracy ? FormatDouble(*c.target_accuracy)
                                          : std::string();
               },
               [](RunConfig& c, const std::string& v) {
                 if (Trim(v).empty()) {
                   c.target_accuracy.reset();
                 } else {
                   c.target_accuracy = ParseDouble("target_accuracy", v);
                 }
               }},
      SEAFL_DOUBLE("run", "max_virtual_time", max_virtual_time),
      SEAFL_INT("run", "max_rounds", max_rounds),
      SEAFL_BOOL("run", "stop_at_target", stop_at_target),
      SEAFL_BOOL("run", "drain", drain),
      SEAFL_UNSIGNED("run", "workers", workers),
      SEAFL_DOUBLE("run", "link_latency", link_latency),
      SEAFL_DOUBLE("run", "notification_latency", notification_latency),

      SEAFL_ENUM("policy", "policy", policy.kind, ParsePolicyKind),
      SEAFL_INT("policy", "buffer_size", policy.hyper.buffer_size),
      KeyEntry{"policy", "staleness_limit", ValueType::kStaleness,
               [](const RunConfig& c) {
                 return c.policy.hyper.beta == kUnboundedStaleness
                            ? std::string("inf")
                            : std::to_string(c.policy.hyper.beta);
               },
               [](RunConfig& c, const std::string& v) {
                 const std::string t = Trim(v);
                 c.policy.hyper.beta =
                     (t == "inf" || t == "infinity")
                         ? kUnboundedStaleness
                         : ParseInteger<int>("staleness_limit", t);
               }},
      SEAFL_DOUBLE("policy", "alpha", policy.hyper.alpha),
      SEAFL_DOUBLE("policy", "mu", policy.hyper.mu),
      SEAFL_DOUBLE("policy", "theta", policy.hyper.theta),
      SEAFL_DOUBLE("policy", "fedasync_mixing", policy.fedasync_mixing),
      SEAFL_ENUM("policy", "redispatch", policy.redispatch, ParseRedispatch),
      SEAFL_ENUM("policy", "importance_input", policy.hyper.importance_input,
                 ParseImportanceInput),

      SEAFL_ENUM("model", "model", model, ParseModelKind),
      SEAFL_UNSIGNED("model", "hidden_dim", hidden_dim),

      SEAFL_INT("train", "epochs", epochs),
      SEAFL_DOUBLE("train", "learning_rate", learning_rate),
      SEAFL_UNSIGNED("train", "batch_size", batch_size),

      SEAFL_ENUM("data", "data_source", data.source, ParseDataSource),
      SEAFL_INT("data", "num_classes", data.num_classes),
      SEAFL_UNSIGNED("data", "dim", data.dim),
      SEAFL_UNSIGNED("data", "num_samples", data.num_samples),
      SEAFL_DOUBLE("data", "class_sep", data.class_sep),
      SEAFL_DOUBLE("data", "concentration", data.concentration),
      SEAFL_DOUBLE("data", "test_fraction", data.test_fraction),
      SEAFL_STRING("data", "idx_images", data.idx_images),
      SEAFL_STRING("data", "idx_labels", data.idx_labels),
      SEAFL_UNSIGNED("data", "idx_limit", data.idx_limit),

      SEAFL_ENUM("speed", "speed_model", speed.kind, ParseSpeedKind),
      SEAFL_DOUBLE("speed", "zipf_s", speed.zipf_s),
      SEAFL_DOUBLE("speed", "zipf_max_delay", speed.zipf_max_delay),
      SEAFL_DOUBLE("speed", "pareto_shape", speed.pareto_shape),
      SEAFL_DOUBLE("speed", "pareto_scale", speed.pareto_scale),
      SEAFL_DOUBLE("speed", "constant_delay", speed.constant_delay),
      SEAFL_DOUBLE("speed", "base_epoch_time", speed.base_epoch_time),
      SEAFL_ENUM("speed", "delay_mode", speed.delay_mode, ParseDelayMode),
  };
  return entries;
}

#undef SEAFL_UNSIGNED
#undef SEAFL_INT
#undef SEAFL_DOUBLE
#undef SEAFL_BOOL
#undef SEAFL_ENUM
#undef SEAFL_STRING

const KeyEntry& Lookup(const std::string& key) {
  // Accept "section.key" as well as bare keys.
  std::string section;
  std::string name = key;
  if (auto dot = name.find('.'); dot != std::string::npos) {
    section = name.substr(0, dot);
    name = name.substr(dot + 1);
  }
  for (const auto& e : Registry()) {
    if (e.key == name && (section.empty() || e.section == section)) return e;
  }
  throw ConfigError("unknown config key '" + key + "'");
}

}  // namespace

std::string ToString(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kSeafl:
      return "seafl";
    case PolicyKind::kSeafl2:
      return "seafl2";
    case PolicyKind::kFedBuff:
      return "fedbuff";
    case PolicyKind::kFedAsync:
      return "fedasync";
    case PolicyKind::kFedAvg:
      return "fedavg";
  }
  return "unknown";
}

PolicyKind ParsePolicyKind(const std::string& s) {
  if (s == "seafl") return PolicyKind::kSeafl;
  if (s == "seafl2") return PolicyKind::kSeafl2;
  if (s == "fedbuff") return PolicyKind::kFedBuff;
  if (s == "fedasync") return PolicyKind::kFedAsync;
  if (s == "fedavg") return PolicyKind::kFedAvg;
  throw ConfigError("unknown policy '" + s + "'");
}

std::string ToString(Redispatch r) {
  return r == Redispatch::kReporters ? "reporters" : "resample";
}

Redispatch ParseRedispatch(const std::string& s) {
  if (s == "reporters") return Redispatch::kReporters;
  if (s == "resample") return Redispatch::kResample;
  throw ConfigError("unknown redispatch mode '" + s + "'");
}

std::string ToString(DataSource s) {
  return s == DataSource::kSynthetic ? "synthetic" : "idx";
}

DataSource ParseDataSource(const std::string& s) {
  if (s == "synthetic") return DataSource::kSynthetic;
  if (s == "idx") return DataSource::kIdx;
  throw ConfigError("unknown data_source '" + s + "'");
}

std::size_t RunConfig::EffectiveConcurrency() const {
  if (concurrency != 0) return concurrency;
  const auto m = static_cast<std::size_t>(
      std::ceil(0.2 * static_cast<double>(num_clients)));
  return std::max<std::size_t>(m, 1);
}

std::size_t RunConfig::EffectiveBufferSize() const {
  switch (policy.kind) {
    case PolicyKind::kFedAsync:
      return 1;
    case PolicyKind::kFedAvg:
      return EffectiveConcurrency();
    default:
      return static_cast<std::size_t>(std::max(policy.hyper.buffer_size, 0));
  }
}

void RunConfig::Validate() const {
  if (num_clients < 1) throw ConfigError("num_clients must be >= 1");
  const std::size_t m = EffectiveConcurrency();
  if (m > num_clients) {
    throw ConfigError(fmt::format("concurrency ({}) exceeds num_clients ({})",
                                  m, num_clients));
  }
  policy.hyper.Validate();
  if (policy.kind == PolicyKind::kSeafl || policy.kind == PolicyKind::kSeafl2 ||
      policy.kind == PolicyKind::kFedBuff) {
    if (static_cast<std::size_t>(policy.hyper.buffer_size) > m) {
      throw ConfigError(fmt::format("buffer_size ({}) exceeds concurrency ({})",
                                    policy.hyper.buffer_size, m));
    }
  }
  if (policy.kind == PolicyKind::kFedAsync &&
      !(policy.fedasync_mixing > 0.0 && policy.fedasync_mixing <= 1.0)) {
    throw ConfigError("fedasync_mixing must lie in (0, 1]");
  }
  if (model == ModelKind::kMlp && hidden_dim == 0) {
    throw ConfigError("mlp model needs hidden_dim > 0");
  }
  if (model == ModelKind::kLogistic && hidden_dim != 0) {
    throw ConfigError("logistic model must have hidden_dim = 0");
  }
  TrainConfig{epochs, learning_rate, batch_size, 0}.Validate();
  speed.Validate();
  if (data.source == DataSource::kSynthetic) {
    if (data.num_classes < 2) throw ConfigError("num_classes must be >= 2");
    if (data.dim < 1) throw ConfigError("dim must be >= 1");
    if (data.num_samples < static_cast<std::size_t>(data.num_classes)) {
      throw ConfigError("num_samples must be >= num_classes");
    }
    if (!(data.class_sep >= 0.0)) throw ConfigError("class_sep must be >= 0");
  } else if (data.idx_images.empty() || data.idx_labels.empty()) {
    throw ConfigError("idx data source needs idx_images and idx_labels");
  }
  if (!(data.concentration > 0.0)) {
    throw ConfigError("concentration must be positive");
  }
  if (!(data.test_fraction > 0.0 && data.test_fraction < 1.0)) {
    throw ConfigError("test_fraction must lie in (0, 1)");
  }
  if (!target_accuracy) throw ConfigError("target_accuracy is required");
  if (!(*target_accuracy > 0.0 && *target_accuracy < 1.0)) {
    throw ConfigError("target_accuracy must lie in (0, 1)");
  }
  if (!(max_virtual_time > 0.0)) {
    throw ConfigError("max_virtual_time must be positive");
  }
  if (max_rounds < 1) throw ConfigError("max_rounds must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (!(link_latency >= 0.0) || !(notification_latency >= 0.0)) {
    throw ConfigError("latencies must be >= 0");
  }
}

void SetConfigValue(RunConfig& config, const std::string& key,
                    const std::string& value) {
  Lookup(key).set(config, value);
}

std::string GetConfigValue(const RunConfig& config, const std::string& key) {
  return Lookup(key).get(config);
}

const std::vector<ConfigKey>& ConfigKeys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const auto& e : Registry()) out.push_back({e.section, e.key});
    return out;
  }();
  return keys;
}

RunConfig ParseConfig(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  RunConfig config;
  bool saw_target = false;
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      // Top-level key outside any section.
      SetConfigValue(config, name, node.data());
      saw_target |= name == "target_accuracy";
      continue;
    }
    for (const auto& [key, value] : node) {
      SetConfigValue(config, key, value.data());
      saw_target |= key == "target_accuracy";
    }
  }
  if (!saw_target || !config.target_accuracy) {
    throw ConfigError("target_accuracy is required");
  }
  return config;
}

RunConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open config");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return ParseConfig(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string ConfigToJson(const RunConfig& config, int indent) {
  json out = json::object();
  for (const auto& e : Registry()) {
    const std::string v = e.get(config);
    json& slot = out[e.section][e.key];
    switch (e.type) {
      case ValueType::kUnsigned:
        slot = ParseInteger<std::uint64_t>(e.key, v);
        break;
      case ValueType::kInt:
        slot = ParseInteger<long long>(e.key, v);
        break;
      case ValueType::kDouble:
        slot = ParseDouble(e.key, v);
        break;
      case ValueType::kBool:
        slot = ParseBool(e.key, v);
        break;
      case ValueType::kString:
        slot = v;
        break;
      case ValueType::kStaleness:
        if (v == "inf") {
          slot = "inf";
        } else {
          slot = ParseInteger<long long>(e.key, v);
        }
        break;
      case ValueType::kOptionalDouble:
        if (v.empty()) {
          slot = nullptr;
        } else {
          slot = ParseDouble(e.key, v);
        }
        break;
    }
  }
  return out.dump(indent);
}

RunConfig ConfigFromJson(const std::string& json_text) {
  json in;
  try {
    in = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config JSON parse error: ") + e.what());
  }
  if (!in.is_object()) throw ConfigError("config JSON must be an object");
  RunConfig config;
  for (const auto& [section, body] : in.items()) {
    if (!body.is_object()) {
      throw ConfigError("config JSON section '" + section +
                        "' must be an object");
    }
    for (const auto& [key, value] : body.items()) {
      std::string text;
      if (value.is_null()) {
        text = "";
      } else if (value.is_string()) {
        text = value.get<std::string>();
      } else if (value.is_boolean()) {
        text = value.get<bool>() ? "true" : "false";
      } else if (value.is_number_integer()) {
        text = value.is_number_unsigned()
                   ? std::to_string(value.get<std::uint64_t>())
                   : std::to_string(value.get<long long>());
      } else if (value.is_number_float()) {
        text = FormatDouble(value.get<double>());
      } else {
        throw ConfigError("unsupported JSON value for '" + key + "'");
      }
      SetConfigValue(config, key, text);
    }
  }
  return config;
}

}  // namespace seafl
