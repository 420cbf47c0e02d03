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

#ifndef SEAFL_AGGREGATOR_H_
#define SEAFL_AGGREGATOR_H_

#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "seafl/device.h"
#include "seafl/param_math.h"

namespace seafl {

// Staleness limit meaning "no limit": the gate never fires and the staleness
// factor degenerates to alpha.
inline constexpr int kUnboundedStaleness = std::numeric_limits<int>::max();

// What the cosine-importance term compares against the global model.
enum class ImportanceInput {
  kDelta,     // client model minus the global model it was dispatched
  kRawModel,  // client model itself
};

std::string ToString(ImportanceInput input);
ImportanceInput ParseImportanceInput(const std::string& s);

struct SeaflHyper {
  double alpha = 3.0;  // staleness weight
  double mu = 1.0;     // similarity weight
  int beta = 10;       // staleness limit, kUnboundedStaleness to disable
  double theta = 0.8;  // server mixing
  int buffer_size = 10;
  ImportanceInput importance_input = ImportanceInput::kDelta;

  void Validate() const;
  bool operator==(const SeaflHyper&) const = default;
};

// An arrived update together with the global model the server dispatched to
// that client. The base model is the server's own copy, never the client's.
struct BufferedUpdate {
  UpdateRecord record;
  std::shared_ptr<const ParamVector> base_model;
};

struct ClientWeight {
  int client_id = -1;
  int staleness = 0;
  double gamma = 0.0;       // staleness factor
  double importance = 0.0;  // similarity term s
  double raw = 0.0;         // d_k * (gamma + s)
  double normalized = 0.0;
};

struct WeightBreakdown {
  std::vector<ClientWeight> entries;
};

// alpha * beta / ((round - base_round) + beta). Throws ProtocolError when
// base_round is ahead of round.
double StalenessFactor(int round, int base_round, double alpha, int beta);

// mu * (cos(update, global) + 1) / 2, in [0, mu].
double Importance(const ParamVector& update, const ParamVector& global,
                  double mu);

// Per-client adaptive weights for the buffered set. d_k is each client's
// share of the samples held by the buffered clients.
WeightBreakdown ComputeWeights(std::span<const BufferedUpdate> buffer,
                               const ParamVector& global, int round,
                               const SeaflHyper& hyper);

struct AggregationResult {
  ParamVector global;
  WeightBreakdown weights;
};

// Weighted buffer average followed by mixing with the current global model.
AggregationResult SeaflAggregate(std::span<const BufferedUpdate> buffer,
                                 const ParamVector& global, int round,
                                 const SeaflHyper& hyper);

// Same as SeaflAggregate with uniform weights 1/|buffer|.
AggregationResult FedBuffAggregate(std::span<const BufferedUpdate> buffer,
                                   const ParamVector& global,
                                   const SeaflHyper& hyper);

// (1 - mixing) * global + mixing * update.params. mixing in (0, 1].
ParamVector FedAsyncMix(const ParamVector& global, const UpdateRecord& update,
                        double mixing);

// Sample-count weighted mean of the reported models. Every id in
// selected_clients must have reported, otherwise ProtocolError.
ParamVector FedAvgAggregate(std::span<const UpdateRecord> updates,
                            std::span<const int> selected_clients);

}  // namespace seafl

#endif  // SEAFL_AGGREGATOR_H_
