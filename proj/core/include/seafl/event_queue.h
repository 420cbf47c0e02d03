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

#ifndef SEAFL_EVENT_QUEUE_H_
#define SEAFL_EVENT_QUEUE_H_

#include <cstdint>
#include <queue>
#include <string>
#include <vector>

namespace seafl {

enum class EventKind {
  kDispatch,
  kEpochComplete,
  kUploadArrival,
  kNotify,
  kEvalCheckpoint,
};

std::string ToString(EventKind kind);

// A point on the virtual timeline. seq is assigned by EventQueue on insertion
// and breaks ties between events scheduled for the same instant.
struct SimEvent {
  double time = 0.0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::kDispatch;
  int client_id = -1;  // -1 for server-side events

  bool operator==(const SimEvent&) const = default;
};

// Min-queue ordered by (time, seq).
class EventQueue {
 public:
  // Stamps the next sequence number onto event and enqueues it.
  SimEvent Push(SimEvent event);
  SimEvent Pop();
  const SimEvent& Top() const { return heap_.top(); }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  std::uint64_t next_seq() const { return next_seq_; }

 private:
  struct Later {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };
  std::priority_queue<SimEvent, std::vector<SimEvent>, Later> heap_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace seafl

#endif  // SEAFL_EVENT_QUEUE_H_
