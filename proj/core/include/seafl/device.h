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

#ifndef SEAFL_DEVICE_H_
#define SEAFL_DEVICE_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>

#include "seafl/dataset.h"
#include "seafl/event_queue.h"
#include "seafl/param_math.h"
#include "seafl/rng.h"

namespace seafl {

enum class SpeedKind { kZipf, kPareto, kConstant };

std::string ToString(SpeedKind kind);
SpeedKind ParseSpeedKind(const std::string& s);

// Whether a device redraws its idle delay after every epoch or draws it once
// and keeps it, which makes slow devices persistently slow.
enum class DelayMode { kPerEpoch, kPerClient };

std::string ToString(DelayMode mode);
DelayMode ParseDelayMode(const std::string& s);

// Per-epoch idle delay distribution plus the nominal epoch compute time.
struct SpeedModel {
  SpeedKind kind = SpeedKind::kConstant;
  double zipf_s = 1.7;
  double zipf_max_delay = 60.0;  // seconds; larger draws are clamped
  double pareto_shape = 1.5;
  double pareto_scale = 5.0;  // seconds
  double constant_delay = 0.0;
  double base_epoch_time = 10.0;  // seconds for a mean-sized partition
  DelayMode delay_mode = DelayMode::kPerEpoch;

  void Validate() const;
  bool operator==(const SpeedModel&) const = default;
};

// Idle time a device spends after finishing one epoch.
//   zipf:     min(r, zipf_max_delay) seconds, r ~ Zipf(zipf_s) on {1, 2, ...}
//   pareto:   pareto_scale * (U^(-1/pareto_shape) - 1)   (Lomax)
//   constant: constant_delay
double SampleIdleDelay(const SpeedModel& speed, Rng& rng);

enum class DeviceStatus { kIdle, kTraining, kNotified };

std::string ToString(DeviceStatus status);

// What a device reports when its upload reaches the server. Parameters are
// filled in by whoever runs the local training (see sim_engine).
struct UpdateRecord {
  int client_id = -1;
  ParamVector params;
  int base_round = 0;
  std::size_t sample_count = 0;
  int epochs_completed = 0;
  double arrival_time = 0.0;
};

// Everything the server needs to reproduce a device's local training: the
// metadata of an UpdateRecord plus the seed of its shuffling stream.
struct UploadTicket {
  int client_id = -1;
  int base_round = 0;
  std::size_t sample_count = 0;
  int epochs_completed = 0;
  double dispatch_time = 0.0;
  double arrival_time = 0.0;
  std::uint64_t train_seed = 0;
};

// Client-side state machine.
//
//   idle --BeginRound--> training --(E epochs)--> upload --> idle
//                           |
//                     HandleNotification
//                           v
//                        notified --(current epoch ends)--> upload --> idle
//
// Epochs are scheduled lazily one at a time so a notification can cut the
// chain at the next epoch boundary. Each epoch occupies
// epoch_compute_time + SampleIdleDelay() of virtual time.
class Device {
 public:
  Device(int id, Dataset partition, SpeedModel speed, double epoch_compute_time,
         std::uint64_t root_seed, double link_latency = 0.0);

  int id() const { return id_; }
  DeviceStatus status() const { return status_; }
  int base_round() const { return base_round_; }
  int current_epoch() const { return current_epoch_; }
  int planned_epochs() const { return planned_epochs_; }
  bool upload_in_flight() const { return upload_scheduled_; }
  double dispatch_time() const { return dispatch_time_; }
  double epoch_compute_time() const { return epoch_compute_time_; }
  const Dataset& partition() const { return partition_; }
  const SpeedModel& speed() const { return speed_; }
  std::uint64_t dispatch_count() const { return dispatch_count_; }

  // idle -> training. Returns the first epoch-complete event (unsequenced).
  // Throws ProtocolError unless idle.
  SimEvent BeginRound(int round, double now, int epochs);

  // Advances one epoch. Returns the next epoch-complete event, or the
  // upload-arrival event once all planned epochs are done or a notification
  // has been received.
  SimEvent OnEpochComplete(double now);

  // training -> notified. Returns false when the notification is ignored
  // because the device is idle, already notified, or already uploading.
  bool HandleNotification();

  // Upload reached the server: -> idle.
  UploadTicket CompleteUpload(double now);

 private:
  double NextEpochDuration();

  int id_;
  Dataset partition_;
  SpeedModel speed_;
  double epoch_compute_time_;
  double link_latency_;
  std::uint64_t root_seed_;
  Rng delay_rng_;
  double fixed_delay_ = 0.0;  // kPerClient only

  DeviceStatus status_ = DeviceStatus::kIdle;
  int base_round_ = 0;
  int current_epoch_ = 0;
  int planned_epochs_ = 0;
  bool upload_scheduled_ = false;
  double dispatch_time_ = 0.0;
  std::uint64_t dispatch_count_ = 0;
};

}  // namespace seafl

#endif  // SEAFL_DEVICE_H_
