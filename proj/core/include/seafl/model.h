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

#ifndef SEAFL_MODEL_H_
#define SEAFL_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

#include "seafl/dataset.h"
#include "seafl/param_math.h"

namespace seafl {

enum class ModelKind { kLogistic, kMlp };

// Shape of a softmax classifier.
//
// Logistic parameters are laid out as W (num_classes x input_dim, row-major)
// followed by b (num_classes). The MLP adds one tanh hidden layer:
// W1 (hidden x input), b1 (hidden), W2 (classes x hidden), b2 (classes).
struct ModelSpec {
  ModelKind kind = ModelKind::kLogistic;
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  int num_classes = 2;

  void Validate() const;
  std::size_t ParamCount() const;

  bool operator==(const ModelSpec&) const = default;
};

std::string ToString(ModelKind kind);
ModelKind ParseModelKind(const std::string& s);

struct TrainConfig {
  int epochs = 5;
  double learning_rate = 0.05;
  std::size_t batch_size = 16;
  std::uint64_t seed = 0;

  void Validate() const;
  bool operator==(const TrainConfig&) const = default;
};

struct TrainOutcome {
  ParamVector params;
  int epochs_completed;
  std::size_t samples_used;
};

// Weights ~ N(0, 1/fan_in); biases are exactly zero.
ParamVector InitModel(const ModelSpec& spec, std::uint64_t seed);

struct Evaluation {
  double loss;      // mean cross-entropy
  double accuracy;  // top-1, in [0, 1]
};

Evaluation LossAndAccuracy(const ModelSpec& spec, const ParamVector& params,
                           const Dataset& data);

// Analytic gradient of the mean cross-entropy over every row of batch.
ParamVector Gradient(const ModelSpec& spec, const ParamVector& params,
                     const Dataset& batch);

// Same, restricted to the given rows of data (accumulated in index order).
ParamVector Gradient(const ModelSpec& spec, const ParamVector& params,
                     const Dataset& data,
                     std::span<const std::size_t> rows);

// Called after each finished epoch with the number of epochs completed so
// far; returning true stops training before the next epoch starts.
using InterruptPredicate = std::function<bool(int epochs_completed)>;

// Mini-batch SGD for up to cfg.epochs epochs. Each epoch reshuffles the
// partition with an RNG seeded from cfg.seed; rows inside a batch are
// visited in ascending index order, so a single full batch reproduces
// Gradient(start, partition) bit for bit.
TrainOutcome LocalTrain(const ModelSpec& spec, const ParamVector& start,
                        const Dataset& partition, const TrainConfig& cfg,
                        const InterruptPredicate& interrupt = {});

}  // namespace seafl

#endif  // SEAFL_MODEL_H_
