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

#include "seafl/event_queue.h"

#include "seafl/errors.h"

namespace seafl {

std::string ToString(EventKind kind) {
  switch (kind) {
    case EventKind::kDispatch:
      return "dispatch";
    case EventKind::kEpochComplete:
      return "epoch_complete";
    case EventKind::kUploadArrival:
      return "upload_arrival";
    case EventKind::kNotify:
      return "notify";
    case EventKind::kEvalCheckpoint:
      return "eval_checkpoint";
  }
  return "unknown";
}

SimEvent EventQueue::Push(SimEvent event) {
  event.seq = next_seq_++;
  heap_.push(event);
  return event;
}

SimEvent EventQueue::Pop() {
  if (heap_.empty()) throw ProtocolError("EventQueue::Pop on empty queue");
  SimEvent e = heap_.top();
  heap_.pop();
  return e;
}

}  // namespace seafl
