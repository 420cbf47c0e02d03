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

#include "seafl/sim_engine.h"

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <optional>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "seafl/aggregator.h"
#include "seafl/errors.h"
#include "seafl/model.h"
#include "seafl/rng.h"
#include "seafl/worker_pool.h"

namespace seafl {

SimEnvironment BuildEnvironment(const RunConfig& config) {
  config.Validate();
  const auto& dc = config.data;
  Dataset full =
      dc.source == DataSource::kSynthetic
          ? GenerateSynthetic(dc.num_classes, dc.dim, dc.num_samples,
                              dc.class_sep, config.seed)
          : LoadIdx(dc.idx_images, dc.idx_labels,
                    dc.idx_limit == 0 ? std::nullopt
                                      : std::optional<std::size_t>(dc.idx_limit));
  TrainTestSplit split = SplitTrainTest(full, dc.test_fraction, config.seed);
  PartitionPlan plan = DirichletPartition(split.train, config.num_clients,
                                          dc.concentration, config.seed);
  const double mean_size = static_cast<double>(split.train.size()) /
                           static_cast<double>(config.num_clients);

  std::vector<ClientSetup> clients;
  clients.reserve(config.num_clients);
  for (const auto& indices : plan.assignments) {
    const double share = static_cast<double>(indices.size()) / mean_size;
    clients.push_back(ClientSetup{split.train.Subset(indices), config.speed,
                                  config.speed.base_epoch_time * share});
  }
  return SimEnvironment{std::move(clients), std::move(split.test)};
}

bool SeaflGateDefers(int round, int beta,
                     std::span<const OutstandingDispatch> outstanding) {
  if (beta == kUnboundedStaleness) return false;
  return std::any_of(outstanding.begin(), outstanding.end(),
                     [&](const OutstandingDispatch& o) {
                       return round - o.base_round >= beta;
                     });
}

std::vector<int> Seafl2Notifications(
    int round, int beta, std::span<const OutstandingDispatch> outstanding) {
  std::vector<int> out;
  if (beta == kUnboundedStaleness) return out;
  for (const auto& o : outstanding) {
    if (!o.notification_sent && round - o.base_round > beta) {
      out.push_back(o.client_id);
    }
  }
  return out;
}

namespace {

struct Dispatched {
  int base_round = 0;
  std::shared_ptr<const ParamVector> base_model;
  bool notification_sent = false;
};

struct PendingUpload {
  UploadTicket ticket;
  std::shared_ptr<const ParamVector> base_model;
};

class Simulation {
 public:
  Simulation(const RunConfig& config, const SimEnvironment& env,
             const RunHooks& hooks)
      : config_(config),
        env_(env),
        hooks_(hooks),
        server_rng_(MakeRng(config.seed, {Tag(StreamTag::kServer)})) {
    config_.Validate();
    if (env_.clients.size() != config_.num_clients) {
      throw ConfigError(fmt::format(
          "environment has {} clients but num_clients = {}",
          env_.clients.size(), config_.num_clients));
    }
    spec_.kind = config_.model;
    spec_.hidden_dim = config_.hidden_dim;
    spec_.input_dim = env_.test.dim();
    spec_.num_classes = env_.test.num_classes();
    for (const auto& c : env_.clients) {
      if (c.partition.dim() != spec_.input_dim) {
        throw DataError("client partition dimension differs from test set");
      }
      spec_.num_classes = std::max(spec_.num_classes, c.partition.num_classes());
    }
    devices_.reserve(env_.clients.size());
    for (std::size_t k = 0; k < env_.clients.size(); ++k) {
      const auto& c = env_.clients[k];
      devices_.emplace_back(static_cast<int>(k), c.partition, c.speed,
                            c.epoch_compute_time, config_.seed,
                            config_.link_latency);
    }
    buffer_target_ = config_.EffectiveBufferSize();
    log_.policy = ToString(config_.policy.kind);
  }

  MetricsLog Run() {
    global_ = std::make_shared<const ParamVector>(InitModel(spec_, config_.seed));
    RecordCheckpoint(0, 0.0);

    std::vector<int> ids(devices_.size());
    std::iota(ids.begin(), ids.end(), 0);
    std::shuffle(ids.begin(), ids.end(), server_rng_);
    ids.resize(config_.EffectiveConcurrency());
    std::sort(ids.begin(), ids.end());
    if (config_.policy.kind == PolicyKind::kFedAvg) selected_ = ids;
    for (int id : ids) Dispatch(id);

    while (!stop_ && !queue_.empty()) {
      if (queue_.Top().time > config_.max_virtual_time) break;
      Process(queue_.Pop());
    }

    if (config_.drain) {
      draining_ = true;
      while (!queue_.empty()) Process(queue_.Pop());
    }
    log_.stats.in_flight_at_end = outstanding_.size();
    log_.stats.end_time = clock_;
    return std::move(log_);
  }

 private:
  void Trace(const SimEvent& e) {
    if (hooks_.on_event) hooks_.on_event(TraceEntry{e, round_});
  }

  void Process(const SimEvent& e) {
    if (e.time < clock_) {
      throw ProtocolError("virtual clock moved backwards");
    }
    clock_ = e.time;
    Trace(e);
    Device& device = devices_.at(static_cast<std::size_t>(e.client_id));
    switch (e.kind) {
      case EventKind::kEpochComplete:
        queue_.Push(device.OnEpochComplete(clock_));
        break;
      case EventKind::kUploadArrival:
        OnUpload(device);
        break;
      case EventKind::kNotify:
        if (!device.HandleNotification()) ++log_.stats.ignored_notifications;
        break;
      default:
        throw ProtocolError("unexpected queued event " + ToString(e.kind));
    }
  }

  void Dispatch(int id) {
    Device& device = devices_.at(static_cast<std::size_t>(id));
    queue_.Push(device.BeginRound(round_, clock_, config_.epochs));
    outstanding_[id] = Dispatched{round_, global_, false};
    ++log_.stats.dispatches;
    if (hooks_.on_event) {
      Trace(SimEvent{clock_, queue_.next_seq(), EventKind::kDispatch, id});
    }
  }

  void OnUpload(Device& device) {
    UploadTicket ticket = device.CompleteUpload(clock_);
    ++log_.stats.uploads;
    auto it = outstanding_.find(ticket.client_id);
    if (it == outstanding_.end()) {
      throw ProtocolError(fmt::format("client {} uploaded without a dispatch",
                                      ticket.client_id));
    }
    if (ticket.epochs_completed < device.planned_epochs()) {
      ++log_.stats.partial_updates;
    }
    buffer_.push_back(PendingUpload{ticket, it->second.base_model});
    outstanding_.erase(it);
    if (draining_) return;

    log_.stats.max_buffer_size =
        std::max(log_.stats.max_buffer_size, buffer_.size());
    TryAggregate();
    if (!stop_ && config_.policy.kind == PolicyKind::kSeafl2) Notify();
  }

  std::vector<OutstandingDispatch> OutstandingView() const {
    std::vector<OutstandingDispatch> view;
    view.reserve(outstanding_.size());
    for (const auto& [id, d] : outstanding_) {
      view.push_back({id, d.base_round, d.notification_sent});
    }
    return view;
  }

  void TryAggregate() {
    const auto kind = config_.policy.kind;
    if (kind == PolicyKind::kFedAvg) {
      if (buffer_.size() < selected_.size()) return;
    } else if (buffer_.size() < buffer_target_) {
      return;
    }
    if (kind == PolicyKind::kSeafl) {
      const auto view = OutstandingView();
      if (SeaflGateDefers(round_, config_.policy.hyper.beta, view)) {
        if (!deferring_) ++log_.stats.deferrals;
        deferring_ = true;
        return;
      }
      deferring_ = false;
    }
    Aggregate();
  }

  void Notify() {
    const auto view = OutstandingView();
    for (int id : Seafl2Notifications(round_, config_.policy.hyper.beta, view)) {
      outstanding_.at(id).notification_sent = true;
      queue_.Push(SimEvent{clock_ + config_.notification_latency, 0,
                           EventKind::kNotify, id});
      ++log_.stats.notifications;
      ++notifications_since_checkpoint_;
    }
  }

  std::vector<BufferedUpdate> TrainBuffered() {
    std::vector<std::optional<BufferedUpdate>> slots(buffer_.size());
    ParallelFor(config_.workers, buffer_.size(), [&](std::size_t i) {
      const PendingUpload& p = buffer_[i];
      const Device& device = devices_[static_cast<std::size_t>(p.ticket.client_id)];
      TrainConfig cfg{p.ticket.epochs_completed, config_.learning_rate,
                      config_.batch_size, p.ticket.train_seed};
      TrainOutcome out = LocalTrain(spec_, *p.base_model, device.partition(), cfg);
      slots[i].emplace(BufferedUpdate{
          UpdateRecord{p.ticket.client_id, std::move(out.params),
                       p.ticket.base_round, p.ticket.sample_count,
                       out.epochs_completed, p.ticket.arrival_time},
          p.base_model});
    });
    std::vector<BufferedUpdate> updates;
    updates.reserve(slots.size());
    for (auto& s : slots) updates.push_back(std::move(*s));
    return updates;
  }

  void Aggregate() {
    std::vector<BufferedUpdate> updates = TrainBuffered();
    if (hooks_.on_aggregate) hooks_.on_aggregate(round_, updates);

    const auto& hyper = config_.policy.hyper;
    int staleness_max = 0;
    double staleness_sum = 0.0;
    for (const auto& u : updates) {
      const int s = round_ - u.record.base_round;
      if (config_.policy.kind == PolicyKind::kSeafl &&
          hyper.beta != kUnboundedStaleness && s > hyper.beta) {
        throw ProtocolError(fmt::format(
            "SEAFL aggregated client {} with staleness {} > limit {}",
            u.record.client_id, s, hyper.beta));
      }
      staleness_max = std::max(staleness_max, s);
      staleness_sum += s;
    }

    std::optional<ParamVector> next;
    switch (config_.policy.kind) {
      case PolicyKind::kSeafl:
      case PolicyKind::kSeafl2: {
        AggregationResult r = SeaflAggregate(updates, *global_, round_, hyper);
        LogWeights(r.weights);
        next.emplace(std::move(r.global));
        break;
      }
      case PolicyKind::kFedBuff: {
        AggregationResult r = FedBuffAggregate(updates, *global_, hyper);
        for (std::size_t i = 0; i < updates.size(); ++i) {
          r.weights.entries[i].staleness = round_ - updates[i].record.base_round;
        }
        LogWeights(r.weights);
        next.emplace(std::move(r.global));
        break;
      }
      case PolicyKind::kFedAsync:
        next.emplace(FedAsyncMix(*global_, updates.front().record,
                                 config_.policy.fedasync_mixing));
        break;
      case PolicyKind::kFedAvg: {
        std::vector<UpdateRecord> records;
        records.reserve(updates.size());
        for (auto& u : updates) records.push_back(u.record);
        next.emplace(FedAvgAggregate(records, selected_));
        break;
      }
    }

    std::vector<int> reporters;
    reporters.reserve(buffer_.size());
    for (const auto& p : buffer_) reporters.push_back(p.ticket.client_id);
    buffer_.clear();

    global_ = std::make_shared<const ParamVector>(std::move(*next));
    ++round_;
    ++log_.stats.aggregations;
    log_.stats.aggregated_updates += updates.size();
    log_.stats.max_aggregated_staleness =
        std::max(log_.stats.max_aggregated_staleness, staleness_max);
    RecordCheckpoint(staleness_max,
                     staleness_sum / static_cast<double>(updates.size()));

    if (round_ >= config_.max_rounds) stop_ = true;
    if (config_.stop_at_target &&
        log_.checkpoints.back().test_accuracy >= *config_.target_accuracy) {
      stop_ = true;
    }
    if (stop_) return;
    RedispatchAfter(reporters);
  }

  void LogWeights(const WeightBreakdown& w) {
    for (const auto& e : w.entries) {
      log_.weights.push_back(WeightRow{round_, e.client_id, e.staleness,
                                       e.gamma, e.importance, e.raw,
                                       e.normalized});
    }
  }

  // Uniform choice of count clients among those not currently training,
  // dispatched in ascending id order.
  std::vector<int> SampleIdle(std::size_t count) {
    std::vector<int> idle;
    for (const auto& d : devices_) {
      if (d.status() == DeviceStatus::kIdle && !outstanding_.contains(d.id())) {
        idle.push_back(d.id());
      }
    }
    std::shuffle(idle.begin(), idle.end(), server_rng_);
    idle.resize(std::min(count, idle.size()));
    std::sort(idle.begin(), idle.end());
    return idle;
  }

  void RedispatchAfter(const std::vector<int>& reporters) {
    if (config_.policy.kind == PolicyKind::kFedAvg) {
      selected_ = SampleIdle(config_.EffectiveConcurrency());
      for (int id : selected_) Dispatch(id);
      return;
    }
    if (config_.policy.redispatch == Redispatch::kReporters) {
      for (int id : reporters) Dispatch(id);
    } else {
      for (int id : SampleIdle(reporters.size())) Dispatch(id);
    }
  }

  void RecordCheckpoint(int staleness_max, double staleness_mean) {
    const Evaluation ev = LossAndAccuracy(spec_, *global_, env_.test);
    log_.checkpoints.push_back(Checkpoint{round_, clock_, ev.loss, ev.accuracy,
                                          staleness_max, staleness_mean,
                                          notifications_since_checkpoint_});
    notifications_since_checkpoint_ = 0;
    if (hooks_.on_event) {
      Trace(SimEvent{clock_, queue_.next_seq(), EventKind::kEvalCheckpoint, -1});
    }
  }

  const RunConfig& config_;
  const SimEnvironment& env_;
  const RunHooks& hooks_;
  ModelSpec spec_;
  std::vector<Device> devices_;
  EventQueue queue_;
  Rng server_rng_;

  std::shared_ptr<const ParamVector> global_;
  int round_ = 0;
  double clock_ = 0.0;
  std::size_t buffer_target_ = 1;
  std::vector<PendingUpload> buffer_;
  std::map<int, Dispatched> outstanding_;
  std::vector<int> selected_;
  bool deferring_ = false;
  bool stop_ = false;
  bool draining_ = false;
  int notifications_since_checkpoint_ = 0;
  MetricsLog log_;
};

}  // namespace

MetricsLog Run(const RunConfig& config) {
  const SimEnvironment env = BuildEnvironment(config);
  return Run(config, env);
}

MetricsLog Run(const RunConfig& config, const SimEnvironment& env,
               const RunHooks& hooks) {
  return Simulation(config, env, hooks).Run();
}

}  // namespace seafl
