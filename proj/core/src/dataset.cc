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

#include "seafl/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <string>

#include <fmt/format.h>

#include "seafl/errors.h"
#include "seafl/rng.h"

namespace seafl {

Dataset::Dataset(std::vector<double> features, std::vector<int> labels,
                 std::size_t dim, int num_classes)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      dim_(dim),
      num_classes_(num_classes) {
  if (labels_.empty()) throw DataError("dataset must contain at least one row");
  if (dim_ == 0) throw DataError("dataset feature dimension must be positive");
  if (num_classes_ < 2) throw DataError("dataset needs at least two classes");
  if (features_.size() != labels_.size() * dim_) {
    throw DataError("feature matrix size does not match n * dim");
  }
  for (int y : labels_) {
    if (y < 0 || y >= num_classes_) {
      throw DataError(fmt::format("label {} outside [0, {})", y, num_classes_));
    }
  }
  for (double x : features_) {
    if (!std::isfinite(x)) throw DataError("non-finite feature value");
  }
}

Dataset Dataset::Subset(std::span<const std::size_t> indices) const {
  std::vector<double> features;
  std::vector<int> labels;
  features.reserve(indices.size() * dim_);
  labels.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= size()) throw DataError("subset index out of range");
    auto r = row(i);
    features.insert(features.end(), r.begin(), r.end());
    labels.push_back(labels_[i]);
  }
  return Dataset(std::move(features), std::move(labels), dim_, num_classes_);
}

std::vector<std::size_t> Dataset::ClassHistogram() const {
  std::vector<std::size_t> hist(num_classes_, 0);
  for (int y : labels_) ++hist[y];
  return hist;
}

std::vector<double> PartitionPlan::Fractions() const {
  std::size_t total = 0;
  for (const auto& a : assignments) total += a.size();
  std::vector<double> out;
  out.reserve(assignments.size());
  for (const auto& a : assignments) {
    out.push_back(static_cast<double>(a.size()) / static_cast<double>(total));
  }
  return out;
}

Dataset GenerateSynthetic(int num_classes, std::size_t dim, std::size_t n,
                          double class_sep, std::uint64_t seed) {
  if (num_classes < 2) throw ConfigError("num_classes must be >= 2");
  if (dim < 1) throw ConfigError("dim must be >= 1");
  if (n < static_cast<std::size_t>(num_classes)) {
    throw ConfigError("num_samples must be >= num_classes");
  }
  if (!(class_sep >= 0.0) || !std::isfinite(class_sep)) {
    throw ConfigError("class_sep must be finite and non-negative");
  }

  Rng rng = MakeRng(seed, {Tag(StreamTag::kData)});
  std::normal_distribution<double> normal(0.0, 1.0);

  // Class directions: Gram-Schmidt on Gaussian draws while room remains,
  // plain random unit vectors after that.
  std::vector<std::vector<double>> means(num_classes,
                                         std::vector<double>(dim));
  for (int c = 0; c < num_classes; ++c) {
    auto& m = means[c];
    for (;;) {
      for (double& x : m) x = normal(rng);
      if (static_cast<std::size_t>(c) < dim) {
        for (int p = 0; p < c; ++p) {
          double proj = 0.0;
          for (std::size_t j = 0; j < dim; ++j) proj += m[j] * means[p][j];
          for (std::size_t j = 0; j < dim; ++j) m[j] -= proj * means[p][j];
        }
      }
      double norm = 0.0;
      for (double x : m) norm += x * x;
      norm = std::sqrt(norm);
      if (norm > 1e-8) {
        for (double& x : m) x /= norm;
        break;
      }
    }
  }
  for (auto& m : means) {
    for (double& x : m) x *= class_sep;
  }

  std::vector<double> features(n * dim);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int y = static_cast<int>(i % static_cast<std::size_t>(num_classes));
    labels[i] = y;
    for (std::size_t j = 0; j < dim; ++j) {
      features[i * dim + j] = means[y][j] + normal(rng);
    }
  }
  return Dataset(std::move(features), std::move(labels), dim, num_classes);
}

PartitionPlan DirichletPartition(const Dataset& data, std::size_t num_clients,
                                 double concentration, std::uint64_t seed) {
  if (num_clients == 0) throw ConfigError("num_clients must be positive");
  if (num_clients > data.size()) {
    throw ConfigError(fmt::format("num_clients ({}) exceeds dataset size ({})",
                                  num_clients, data.size()));
  }
  if (!(concentration > 0.0) || !std::isfinite(concentration)) {
    throw ConfigError("Dirichlet concentration must be positive and finite");
  }

  Rng rng = MakeRng(seed, {Tag(StreamTag::kPartition)});
  std::gamma_distribution<double> gamma(concentration, 1.0);

  std::vector<std::vector<std::size_t>> by_class(data.num_classes());
  for (std::size_t i = 0; i < data.size(); ++i) {
    by_class[data.label(i)].push_back(i);
  }

  PartitionPlan plan;
  plan.concentration = concentration;
  plan.assignments.resize(num_clients);

  std::vector<double> props(num_clients);
  for (auto& members : by_class) {
    if (members.empty()) continue;
    std::shuffle(members.begin(), members.end(), rng);
    double total = 0.0;
    for (double& p : props) {
      p = gamma(rng);
      total += p;
    }
    if (!(total > 0.0)) {
      std::fill(props.begin(), props.end(), 1.0);
      total = static_cast<double>(num_clients);
    }
    const double count = static_cast<double>(members.size());
    double cumulative = 0.0;
    std::size_t begin = 0;
    for (std::size_t k = 0; k < num_clients; ++k) {
      cumulative += props[k];
      std::size_t end =
          k + 1 == num_clients
              ? members.size()
              : std::min(members.size(),
                         static_cast<std::size_t>(
                             std::floor(cumulative / total * count + 0.5)));
      end = std::max(end, begin);
      plan.assignments[k].insert(plan.assignments[k].end(),
                                 members.begin() + begin,
                                 members.begin() + end);
      begin = end;
    }
  }

  // Repair: every client needs at least one sample.
  for (std::size_t k = 0; k < num_clients; ++k) {
    if (!plan.assignments[k].empty()) continue;
    auto largest = std::max_element(
        plan.assignments.begin(), plan.assignments.end(),
        [](const auto& a, const auto& b) { return a.size() < b.size(); });
    plan.assignments[k].push_back(largest->back());
    largest->pop_back();
  }
  for (auto& a : plan.assignments) std::sort(a.begin(), a.end());
  return plan;
}

TrainTestSplit SplitTrainTest(const Dataset& data, double test_fraction,
                              std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("test_fraction must lie in (0, 1)");
  }
  if (data.size() < 2) throw DataError("need at least two rows to split");
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng = MakeRng(seed, {Tag(StreamTag::kTestSplit)});
  std::shuffle(order.begin(), order.end(), rng);

  std::size_t n_test = static_cast<std::size_t>(
      std::llround(test_fraction * static_cast<double>(data.size())));
  n_test = std::clamp<std::size_t>(n_test, 1, data.size() - 1);
  std::vector<std::size_t> test(order.begin(), order.begin() + n_test);
  std::vector<std::size_t> train(order.begin() + n_test, order.end());
  std::sort(test.begin(), test.end());
  std::sort(train.begin(), train.end());
  return {data.Subset(train), data.Subset(test)};
}

void WriteDatasetCsv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  for (std::size_t j = 0; j < data.dim(); ++j) out << "feature_" << j << ',';
  out << "label\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (double x : data.row(i)) out << fmt::format("{}", x) << ',';
    out << data.label(i) << '\n';
  }
  if (!out) throw IoError(path.string(), "write failed");
}

}  // namespace seafl
