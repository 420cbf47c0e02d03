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

#ifndef SEAFL_METRICS_H_
#define SEAFL_METRICS_H_

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace seafl {

// Test-set evaluation taken right after an aggregation (round 0 is the
// initial model at time 0).
struct Checkpoint {
  int round = 0;
  double virtual_time = 0.0;
  double test_loss = 0.0;
  double test_accuracy = 0.0;
  int staleness_max = 0;
  double staleness_mean = 0.0;
  int notifications_sent = 0;  // since the previous checkpoint
};

struct WeightRow {
  int round = 0;  // round whose aggregation used the weight
  int client_id = -1;
  int staleness = 0;
  double gamma = 0.0;
  double importance = 0.0;
  double raw = 0.0;
  double normalized = 0.0;
};

struct RunStats {
  std::size_t dispatches = 0;
  std::size_t uploads = 0;
  std::size_t aggregations = 0;
  std::size_t aggregated_updates = 0;
  std::size_t deferrals = 0;  // aggregations postponed by the staleness gate
  std::size_t notifications = 0;
  std::size_t ignored_notifications = 0;
  std::size_t partial_updates = 0;  // epochs_completed < planned epochs
  int max_aggregated_staleness = 0;
  std::size_t max_buffer_size = 0;
  std::size_t in_flight_at_end = 0;
  double end_time = 0.0;
};

struct MetricsLog {
  std::string policy;
  std::vector<Checkpoint> checkpoints;
  std::vector<WeightRow> weights;
  RunStats stats;
};

// round,virtual_time_s,policy,test_loss,test_accuracy,buffer_staleness_max,
// buffer_staleness_mean,notifications_sent
void WriteMetricsCsvHeader(std::ostream& out);
void WriteMetricsCsvRows(const MetricsLog& log, std::ostream& out);
void WriteMetricsCsv(const MetricsLog& log, std::ostream& out);

// round,client_id,staleness,gamma_k,s_k,p_raw_k,p_norm_k
void WriteWeightsCsv(const MetricsLog& log, std::ostream& out);

// policy,virtual_time_s,test_accuracy for every log, one block per policy.
void WriteCurvesCsv(std::span<const MetricsLog> logs, std::ostream& out);

std::string MetricsCsvString(const MetricsLog& log);

}  // namespace seafl

#endif  // SEAFL_METRICS_H_
