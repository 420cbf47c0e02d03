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

#include "seafl/metrics.h"

#include <sstream>

#include <fmt/format.h>

namespace seafl {

// Doubles use the shortest representation that round-trips, so identical
// runs produce identical bytes.

void WriteMetricsCsvHeader(std::ostream& out) {
  out << "round,virtual_time_s,policy,test_loss,test_accuracy,"
         "buffer_staleness_max,buffer_staleness_mean,notifications_sent\n";
}

void WriteMetricsCsvRows(const MetricsLog& log, std::ostream& out) {
  for (const auto& c : log.checkpoints) {
    out << fmt::format("{},{},{},{},{},{},{},{}\n", c.round, c.virtual_time,
                       log.policy, c.test_loss, c.test_accuracy,
                       c.staleness_max, c.staleness_mean,
                       c.notifications_sent);
  }
}

void WriteMetricsCsv(const MetricsLog& log, std::ostream& out) {
  WriteMetricsCsvHeader(out);
  WriteMetricsCsvRows(log, out);
}

void WriteWeightsCsv(const MetricsLog& log, std::ostream& out) {
  out << "round,client_id,staleness,gamma_k,s_k,p_raw_k,p_norm_k\n";
  for (const auto& w : log.weights) {
    out << fmt::format("{},{},{},{},{},{},{}\n", w.round, w.client_id,
                       w.staleness, w.gamma, w.importance, w.raw,
                       w.normalized);
  }
}

void WriteCurvesCsv(std::span<const MetricsLog> logs, std::ostream& out) {
  out << "policy,virtual_time_s,test_accuracy\n";
  for (const auto& log : logs) {
    for (const auto& c : log.checkpoints) {
      out << fmt::format("{},{},{}\n", log.policy, c.virtual_time,
                         c.test_accuracy);
    }
  }
}

std::string MetricsCsvString(const MetricsLog& log) {
  std::ostringstream out;
  WriteMetricsCsv(log, out);
  return out.str();
}

}  // namespace seafl
