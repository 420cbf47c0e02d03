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

#include "seafl/model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <fmt/format.h>

#include "seafl/errors.h"
#include "seafl/rng.h"

namespace seafl {

namespace {

// Offsets of each parameter block inside the flat vector.
struct Layout {
  std::size_t d, h, c;
  // logistic: W [0, c*d), b [c*d, c*d + c)
  // mlp: W1 [0, h*d), b1, W2 (c x h), b2
  std::size_t w1, b1, w2, b2, total;

  explicit Layout(const ModelSpec& s)
      : d(s.input_dim), h(s.hidden_dim), c(static_cast<std::size_t>(s.num_classes)) {
    if (s.kind == ModelKind::kLogistic) {
      w1 = 0;
      b1 = c * d;
      w2 = b2 = 0;
      total = c * d + c;
    } else {
      w1 = 0;
      b1 = h * d;
      w2 = b1 + h;
      b2 = w2 + c * h;
      total = b2 + c;
    }
  }
};

// Softmax in place over logits; returns log-sum-exp.
double SoftmaxInPlace(std::span<double> z) {
  const double zmax = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - zmax);
    sum += v;
  }
  for (double& v : z) v /= sum;
  return zmax + std::log(sum);
}

class Network {
 public:
  Network(const ModelSpec& spec, std::span<const double> params)
      : spec_(spec), layout_(spec), params_(params),
        hidden_(layout_.h), logits_(layout_.c) {}

  // Forward pass for one row. Leaves softmax probabilities in probs() and
  // returns the cross-entropy against label.
  double Forward(std::span<const double> x, int label) {
    const auto& L = layout_;
    if (spec_.kind == ModelKind::kLogistic) {
      for (std::size_t k = 0; k < L.c; ++k) {
        double z = params_[L.b1 + k];
        const double* w = params_.data() + L.w1 + k * L.d;
        for (std::size_t j = 0; j < L.d; ++j) z += w[j] * x[j];
        logits_[k] = z;
      }
    } else {
      for (std::size_t u = 0; u < L.h; ++u) {
        double a = params_[L.b1 + u];
        const double* w = params_.data() + L.w1 + u * L.d;
        for (std::size_t j = 0; j < L.d; ++j) a += w[j] * x[j];
        hidden_[u] = std::tanh(a);
      }
      for (std::size_t k = 0; k < L.c; ++k) {
        double z = params_[L.b2 + k];
        const double* w = params_.data() + L.w2 + k * L.h;
        for (std::size_t u = 0; u < L.h; ++u) z += w[u] * hidden_[u];
        logits_[k] = z;
      }
    }
    const double z_label = logits_[label];
    const double lse = SoftmaxInPlace(logits_);
    return lse - z_label;
  }

  // Adds d(loss)/d(params) for the row last passed to Forward into grad.
  void Backward(std::span<const double> x, int label, std::span<double> grad) {
    const auto& L = layout_;
    logits_[label] -= 1.0;  // dL/dz = p - onehot
    if (spec_.kind == ModelKind::kLogistic) {
      for (std::size_t k = 0; k < L.c; ++k) {
        const double dz = logits_[k];
        double* g = grad.data() + L.w1 + k * L.d;
        for (std::size_t j = 0; j < L.d; ++j) g[j] += dz * x[j];
        grad[L.b1 + k] += dz;
      }
      return;
    }
    std::vector<double>& dh = scratch_;
    dh.assign(L.h, 0.0);
    for (std::size_t k = 0; k < L.c; ++k) {
      const double dz = logits_[k];
      double* g = grad.data() + L.w2 + k * L.h;
      const double* w = params_.data() + L.w2 + k * L.h;
      for (std::size_t u = 0; u < L.h; ++u) {
        g[u] += dz * hidden_[u];
        dh[u] += w[u] * dz;
      }
      grad[L.b2 + k] += dz;
    }
    for (std::size_t u = 0; u < L.h; ++u) {
      const double da = dh[u] * (1.0 - hidden_[u] * hidden_[u]);
      double* g = grad.data() + L.w1 + u * L.d;
      for (std::size_t j = 0; j < L.d; ++j) g[j] += da * x[j];
      grad[L.b1 + u] += da;
    }
  }

  std::span<const double> probs() const { return logits_; }

 private:
  const ModelSpec& spec_;
  Layout layout_;
  std::span<const double> params_;
  std::vector<double> hidden_;
  std::vector<double> logits_;
  std::vector<double> scratch_;
};

void CheckCompatible(const ModelSpec& spec, std::span<const double> params,
                     const Dataset& data) {
  spec.Validate();
  if (params.size() != spec.ParamCount()) {
    throw DimensionError(fmt::format("model expects {} parameters, got {}",
                                     spec.ParamCount(), params.size()));
  }
  if (data.dim() != spec.input_dim) {
    throw DimensionError(fmt::format("model input_dim {} != data dim {}",
                                     spec.input_dim, data.dim()));
  }
  if (data.num_classes() > spec.num_classes) {
    throw DimensionError("data has more classes than the model");
  }
}

// Mean gradient over rows, written into grad (resized and zeroed).
void MeanGradient(const ModelSpec& spec, std::span<const double> params,
                  const Dataset& data, std::span<const std::size_t> rows,
                  std::vector<double>& grad) {
  grad.assign(params.size(), 0.0);
  Network net(spec, params);
  for (std::size_t i : rows) {
    net.Forward(data.row(i), data.label(i));
    net.Backward(data.row(i), data.label(i), grad);
  }
  const double inv = 1.0 / static_cast<double>(rows.size());
  for (double& g : grad) g *= inv;
}

}  // namespace

std::string ToString(ModelKind kind) {
  return kind == ModelKind::kLogistic ? "logistic" : "mlp";
}

ModelKind ParseModelKind(const std::string& s) {
  if (s == "logistic") return ModelKind::kLogistic;
  if (s == "mlp") return ModelKind::kMlp;
  throw ConfigError("unknown model kind '" + s + "'");
}

void ModelSpec::Validate() const {
  if (input_dim == 0) throw ConfigError("model input_dim must be positive");
  if (num_classes < 2) throw ConfigError("model needs at least two classes");
  if (kind == ModelKind::kMlp && hidden_dim == 0) {
    throw ConfigError("mlp model needs hidden_dim > 0");
  }
  if (kind == ModelKind::kLogistic && hidden_dim != 0) {
    throw ConfigError("logistic model must have hidden_dim = 0");
  }
}

std::size_t ModelSpec::ParamCount() const { return Layout(*this).total; }

void TrainConfig::Validate() const {
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  // Zero is accepted as a null step.
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate must be finite and >= 0");
  }
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
}

ParamVector InitModel(const ModelSpec& spec, std::uint64_t seed) {
  spec.Validate();
  const Layout L(spec);
  Rng rng = MakeRng(seed, {Tag(StreamTag::kModelInit)});
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> w(L.total, 0.0);
  auto fill = [&](std::size_t begin, std::size_t count, std::size_t fan_in) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (std::size_t i = 0; i < count; ++i) w[begin + i] = normal(rng) * scale;
  };
  if (spec.kind == ModelKind::kLogistic) {
    fill(L.w1, L.c * L.d, L.d);
  } else {
    fill(L.w1, L.h * L.d, L.d);
    fill(L.w2, L.c * L.h, L.h);
  }
  return ParamVector(std::move(w));
}

Evaluation LossAndAccuracy(const ModelSpec& spec, const ParamVector& params,
                           const Dataset& data) {
  CheckCompatible(spec, params.values(), data);
  Network net(spec, params.values());
  double loss = 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    loss += net.Forward(data.row(i), data.label(i));
    auto p = net.probs();
    const auto best = static_cast<int>(
        std::max_element(p.begin(), p.end()) - p.begin());
    if (best == data.label(i)) ++correct;
  }
  const double n = static_cast<double>(data.size());
  return {loss / n, static_cast<double>(correct) / n};
}

ParamVector Gradient(const ModelSpec& spec, const ParamVector& params,
                     const Dataset& batch) {
  std::vector<std::size_t> rows(batch.size());
  std::iota(rows.begin(), rows.end(), 0);
  return Gradient(spec, params, batch, rows);
}

ParamVector Gradient(const ModelSpec& spec, const ParamVector& params,
                     const Dataset& data, std::span<const std::size_t> rows) {
  CheckCompatible(spec, params.values(), data);
  if (rows.empty()) throw DataError("gradient over an empty batch");
  std::vector<double> grad;
  MeanGradient(spec, params.values(), data, rows, grad);
  return ParamVector(std::move(grad));
}

TrainOutcome LocalTrain(const ModelSpec& spec, const ParamVector& start,
                        const Dataset& partition, const TrainConfig& cfg,
                        const InterruptPredicate& interrupt) {
  cfg.Validate();
  CheckCompatible(spec, start.values(), partition);

  std::vector<double> w(start.values().begin(), start.values().end());
  std::vector<double> grad;
  std::vector<std::size_t> order(partition.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> batch;
  Rng rng(cfg.seed);

  int completed = 0;
  std::size_t samples = 0;
  while (completed < cfg.epochs) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), begin + cfg.batch_size);
      batch.assign(order.begin() + begin, order.begin() + end);
      std::sort(batch.begin(), batch.end());
      MeanGradient(spec, w, partition, batch, grad);
      for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] -= cfg.learning_rate * grad[i];
      }
      samples += batch.size();
    }
    ++completed;
    if (interrupt && completed < cfg.epochs && interrupt(completed)) break;
  }

  ParamVector params(std::move(w));
  CheckFinite(params, "LocalTrain");
  return {std::move(params), completed, samples};
}

}  // namespace seafl
