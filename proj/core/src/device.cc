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

#include "seafl/device.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "seafl/errors.h"

namespace seafl {

namespace {

// Uniform draw on (0, 1].
double OpenUniform(Rng& rng) {
  return 1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

// Zipf(s) on {1, 2, ...} by Devroye's rejection method; s > 1.
double SampleZipf(double s, Rng& rng) {
  const double b = std::pow(2.0, s - 1.0);
  for (;;) {
    const double u = OpenUniform(rng);
    const double v = OpenUniform(rng);
    const double x = std::floor(std::min(std::pow(u, -1.0 / (s - 1.0)), 1e15));
    const double t = std::pow(1.0 + 1.0 / x, s - 1.0);
    if (v * x * (t - 1.0) / (b - 1.0) <= t / b) return x;
  }
}

}  // namespace

std::string ToString(SpeedKind kind) {
  switch (kind) {
    case SpeedKind::kZipf:
      return "zipf";
    case SpeedKind::kPareto:
      return "pareto";
    case SpeedKind::kConstant:
      return "constant";
  }
  return "unknown";
}

SpeedKind ParseSpeedKind(const std::string& s) {
  if (s == "zipf") return SpeedKind::kZipf;
  if (s == "pareto") return SpeedKind::kPareto;
  if (s == "constant") return SpeedKind::kConstant;
  throw ConfigError("unknown speed model '" + s + "'");
}

std::string ToString(DelayMode mode) {
  return mode == DelayMode::kPerEpoch ? "per_epoch" : "per_client";
}

DelayMode ParseDelayMode(const std::string& s) {
  if (s == "per_epoch") return DelayMode::kPerEpoch;
  if (s == "per_client") return DelayMode::kPerClient;
  throw ConfigError("unknown delay_mode '" + s + "'");
}

std::string ToString(DeviceStatus status) {
  switch (status) {
    case DeviceStatus::kIdle:
      return "idle";
    case DeviceStatus::kTraining:
      return "training";
    case DeviceStatus::kNotified:
      return "notified";
  }
  return "unknown";
}

void SpeedModel::Validate() const {
  if (!(base_epoch_time >= 0.0) || !std::isfinite(base_epoch_time)) {
    throw ConfigError("base_epoch_time must be finite and >= 0");
  }
  switch (kind) {
    case SpeedKind::kZipf:
      if (!(zipf_s > 1.0)) throw ConfigError("zipf_s must be > 1");
      if (!(zipf_max_delay >= 0.0)) {
        throw ConfigError("zipf_max_delay must be >= 0");
      }
      break;
    case SpeedKind::kPareto:
      if (!(pareto_shape > 0.0)) throw ConfigError("pareto_shape must be > 0");
      if (!(pareto_scale >= 0.0)) {
        throw ConfigError("pareto_scale must be >= 0");
      }
      break;
    case SpeedKind::kConstant:
      if (!(constant_delay >= 0.0) || !std::isfinite(constant_delay)) {
        throw ConfigError("constant_delay must be finite and >= 0");
      }
      break;
  }
}

double SampleIdleDelay(const SpeedModel& speed, Rng& rng) {
  switch (speed.kind) {
    case SpeedKind::kZipf:
      return std::min(SampleZipf(speed.zipf_s, rng), speed.zipf_max_delay);
    case SpeedKind::kPareto: {
      const double u = OpenUniform(rng);
      return speed.pareto_scale *
             (std::pow(u, -1.0 / speed.pareto_shape) - 1.0);
    }
    case SpeedKind::kConstant:
      return speed.constant_delay;
  }
  return 0.0;
}

Device::Device(int id, Dataset partition, SpeedModel speed,
               double epoch_compute_time, std::uint64_t root_seed,
               double link_latency)
    : id_(id),
      partition_(std::move(partition)),
      speed_(speed),
      epoch_compute_time_(epoch_compute_time),
      link_latency_(link_latency),
      root_seed_(root_seed),
      delay_rng_(MakeRng(root_seed, {Tag(StreamTag::kDeviceDelay),
                                     static_cast<std::uint64_t>(id)})) {
  speed_.Validate();
  if (!(epoch_compute_time_ >= 0.0) || !(link_latency_ >= 0.0)) {
    throw ConfigError("device times must be non-negative");
  }
  if (speed_.delay_mode == DelayMode::kPerClient) {
    fixed_delay_ = SampleIdleDelay(speed_, delay_rng_);
  }
}

double Device::NextEpochDuration() {
  const double idle = speed_.delay_mode == DelayMode::kPerClient
                          ? fixed_delay_
                          : SampleIdleDelay(speed_, delay_rng_);
  return epoch_compute_time_ + idle;
}

SimEvent Device::BeginRound(int round, double now, int epochs) {
  if (status_ != DeviceStatus::kIdle) {
    throw ProtocolError(fmt::format("client {} dispatched while {}", id_,
                                    ToString(status_)));
  }
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  status_ = DeviceStatus::kTraining;
  base_round_ = round;
  current_epoch_ = 0;
  planned_epochs_ = epochs;
  upload_scheduled_ = false;
  dispatch_time_ = now;
  ++dispatch_count_;
  return SimEvent{now + NextEpochDuration(),
                  0, EventKind::kEpochComplete, id_};
}

SimEvent Device::OnEpochComplete(double now) {
  if (status_ == DeviceStatus::kIdle || upload_scheduled_) {
    throw ProtocolError(
        fmt::format("client {} got epoch_complete while not training", id_));
  }
  ++current_epoch_;
  if (current_epoch_ >= planned_epochs_ ||
      status_ == DeviceStatus::kNotified) {
    upload_scheduled_ = true;
    return SimEvent{now + link_latency_, 0, EventKind::kUploadArrival, id_};
  }
  return SimEvent{now + NextEpochDuration(),
                  0, EventKind::kEpochComplete, id_};
}

bool Device::HandleNotification() {
  if (status_ != DeviceStatus::kTraining || upload_scheduled_) {
    spdlog::debug("client {}: notification ignored (status {}, uploading {})",
                  id_, ToString(status_), upload_scheduled_);
    return false;
  }
  status_ = DeviceStatus::kNotified;
  return true;
}

UploadTicket Device::CompleteUpload(double now) {
  if (!upload_scheduled_) {
    throw ProtocolError(
        fmt::format("client {} upload arrived without being sent", id_));
  }
  status_ = DeviceStatus::kIdle;
  upload_scheduled_ = false;
  return UploadTicket{
      id_,
      base_round_,
      partition_.size(),
      current_epoch_,
      dispatch_time_,
      now,
      DeriveSeed(root_seed_, {Tag(StreamTag::kTraining),
                              static_cast<std::uint64_t>(id_),
                              dispatch_count_})};
}

}  // namespace seafl
