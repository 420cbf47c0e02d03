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

#ifndef SEAFL_SIM_ENGINE_H_
#define SEAFL_SIM_ENGINE_H_

#include <functional>
#include <span>
#include <vector>

#include "seafl/config.h"
#include "seafl/dataset.h"
#include "seafl/device.h"
#include "seafl/event_queue.h"
#include "seafl/metrics.h"

namespace seafl {

struct ClientSetup {
  Dataset partition;
  SpeedModel speed;
  double epoch_compute_time = 0.0;
};

// The world a run takes place in: per-client data and speeds plus the
// held-out test set.
struct SimEnvironment {
  std::vector<ClientSetup> clients;
  Dataset test;
};

// Generates or loads the data, splits off the test set, partitions the rest
// with the Dirichlet splitter and assigns each client an epoch compute time
// of base_epoch_time * |D_k| / mean |D_k|.
SimEnvironment BuildEnvironment(const RunConfig& config);

// A dispatch that has not yet been answered by an upload.
struct OutstandingDispatch {
  int client_id = -1;
  int base_round = 0;
  bool notification_sent = false;
};

// SEAFL staleness gate, evaluated with a full buffer at round t. Returns true
// (defer aggregation) if some outstanding client has t - t_k >= beta, since
// aggregating now would push it past the limit.
bool SeaflGateDefers(int round, int beta,
                     std::span<const OutstandingDispatch> outstanding);

// SEAFL2 partial-training trigger: ids of outstanding clients with
// t - t_k > beta that have not been notified for this dispatch yet.
std::vector<int> Seafl2Notifications(
    int round, int beta, std::span<const OutstandingDispatch> outstanding);

struct TraceEntry {
  SimEvent event;
  int round = 0;  // server round when the event was processed
};

struct RunHooks {
  // Called for every processed event, including dispatches and eval
  // checkpoints (which do not pass through the queue).
  std::function<void(const TraceEntry&)> on_event;
  // Called with each aggregated buffer before it is consumed.
  std::function<void(int round, std::span<const BufferedUpdate>)>
      on_aggregate;
};

// Runs one simulation until max_virtual_time, max_rounds, or (with
// stop_at_target) the first checkpoint that reaches target_accuracy.
MetricsLog Run(const RunConfig& config);
MetricsLog Run(const RunConfig& config, const SimEnvironment& env,
               const RunHooks& hooks = {});

}  // namespace seafl

#endif  // SEAFL_SIM_ENGINE_H_
