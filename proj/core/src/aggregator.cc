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

#include "seafl/aggregator.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "seafl/errors.h"

namespace seafl {

std::string ToString(ImportanceInput input) {
  return input == ImportanceInput::kDelta ? "delta" : "raw_model";
}

ImportanceInput ParseImportanceInput(const std::string& s) {
  if (s == "delta") return ImportanceInput::kDelta;
  if (s == "raw_model") return ImportanceInput::kRawModel;
  throw ConfigError("unknown importance_input '" + s + "'");
}

void SeaflHyper::Validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw ConfigError("alpha must be finite and >= 0");
  }
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw ConfigError("mu must be finite and >= 0");
  }
  if (!(alpha + mu > 0.0)) throw ConfigError("alpha + mu must be positive");
  if (beta < 1) throw ConfigError("staleness_limit must be >= 1");
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw ConfigError("theta must lie in [0, 1]");
  }
  if (buffer_size < 1) throw ConfigError("buffer_size must be >= 1");
}

double StalenessFactor(int round, int base_round, double alpha, int beta) {
  if (round < base_round) {
    throw ProtocolError(fmt::format(
        "update base round {} is ahead of server round {}", base_round, round));
  }
  if (beta < 1) throw ConfigError("staleness_limit must be >= 1");
  if (beta == kUnboundedStaleness) return alpha;
  const double b = static_cast<double>(beta);
  return alpha * b / (static_cast<double>(round - base_round) + b);
}

double Importance(const ParamVector& update, const ParamVector& global,
                  double mu) {
  return mu * (CosineSimilarity(update, global) + 1.0) / 2.0;
}

WeightBreakdown ComputeWeights(std::span<const BufferedUpdate> buffer,
                               const ParamVector& global, int round,
                               const SeaflHyper& hyper) {
  if (buffer.empty()) throw EmptyBufferError("ComputeWeights: empty buffer");
  std::size_t total_samples = 0;
  for (const auto& u : buffer) total_samples += u.record.sample_count;
  if (total_samples == 0) {
    throw DataError("ComputeWeights: buffered clients hold no samples");
  }

  WeightBreakdown out;
  out.entries.reserve(buffer.size());
  double raw_sum = 0.0;
  for (const auto& u : buffer) {
    ClientWeight w;
    w.client_id = u.record.client_id;
    w.staleness = round - u.record.base_round;
    w.gamma = StalenessFactor(round, u.record.base_round, hyper.alpha,
                              hyper.beta);
    if (hyper.importance_input == ImportanceInput::kDelta) {
      if (!u.base_model) {
        throw ProtocolError(fmt::format(
            "client {}: no dispatched base model recorded", w.client_id));
      }
      w.importance =
          Importance(Subtract(u.record.params, *u.base_model), global, hyper.mu);
    } else {
      w.importance = Importance(u.record.params, global, hyper.mu);
    }
    const double d = static_cast<double>(u.record.sample_count) /
                     static_cast<double>(total_samples);
    w.raw = d * (w.gamma + w.importance);
    raw_sum += w.raw;
    out.entries.push_back(w);
  }
  if (!(raw_sum > 0.0)) {
    throw DegenerateWeightsError(
        "all raw aggregation weights are zero; cannot normalize");
  }
  for (auto& w : out.entries) w.normalized = w.raw / raw_sum;
  return out;
}

namespace {

AggregationResult Combine(std::span<const BufferedUpdate> buffer,
                          const ParamVector& global, double theta,
                          WeightBreakdown weights) {
  std::vector<WeightedParams> terms;
  terms.reserve(buffer.size());
  for (std::size_t i = 0; i < buffer.size(); ++i) {
    terms.push_back({weights.entries[i].normalized, buffer[i].record.params});
  }
  ParamVector fresh = WeightedSum(terms);
  return {Mix(global, fresh, theta), std::move(weights)};
}

}  // namespace

AggregationResult SeaflAggregate(std::span<const BufferedUpdate> buffer,
                                 const ParamVector& global, int round,
                                 const SeaflHyper& hyper) {
  WeightBreakdown weights = ComputeWeights(buffer, global, round, hyper);
  return Combine(buffer, global, hyper.theta, std::move(weights));
}

AggregationResult FedBuffAggregate(std::span<const BufferedUpdate> buffer,
                                   const ParamVector& global,
                                   const SeaflHyper& hyper) {
  if (buffer.empty()) throw EmptyBufferError("FedBuffAggregate: empty buffer");
  const double uniform = 1.0 / static_cast<double>(buffer.size());
  WeightBreakdown weights;
  weights.entries.reserve(buffer.size());
  for (const auto& u : buffer) {
    ClientWeight w;
    w.client_id = u.record.client_id;
    w.staleness = 0;
    w.raw = uniform;
    w.normalized = uniform;
    weights.entries.push_back(w);
  }
  return Combine(buffer, global, hyper.theta, std::move(weights));
}

ParamVector FedAsyncMix(const ParamVector& global, const UpdateRecord& update,
                        double mixing) {
  if (!(mixing > 0.0 && mixing <= 1.0)) {
    throw ConfigError("fedasync_mixing must lie in (0, 1]");
  }
  return Mix(global, update.params, mixing);
}

ParamVector FedAvgAggregate(std::span<const UpdateRecord> updates,
                            std::span<const int> selected_clients) {
  if (updates.empty()) throw EmptyBufferError("FedAvgAggregate: no updates");
  for (int id : selected_clients) {
    const bool reported =
        std::any_of(updates.begin(), updates.end(),
                    [id](const UpdateRecord& u) { return u.client_id == id; });
    if (!reported) {
      throw ProtocolError(
          fmt::format("FedAvg barrier: selected client {} did not report", id));
    }
  }
  if (updates.size() != selected_clients.size()) {
    throw ProtocolError("FedAvg barrier: update count != selected clients");
  }
  std::size_t total = 0;
  for (const auto& u : updates) total += u.sample_count;
  if (total == 0) throw DataError("FedAvgAggregate: no samples");
  std::vector<WeightedParams> terms;
  terms.reserve(updates.size());
  for (const auto& u : updates) {
    terms.push_back({static_cast<double>(u.sample_count) /
                         static_cast<double>(total),
                     u.params});
  }
  return WeightedSum(terms);
}

}  // namespace seafl
