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

#ifndef SEAFL_DATASET_H_
#define SEAFL_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace seafl {

// Dense labelled classification data: n rows of dim features, row-major.
// Immutable after construction.
class Dataset {
 public:
  Dataset(std::vector<double> features, std::vector<int> labels,
          std::size_t dim, int num_classes);

  std::size_t size() const { return labels_.size(); }
  std::size_t dim() const { return dim_; }
  int num_classes() const { return num_classes_; }

  std::span<const double> row(std::size_t i) const {
    return {features_.data() + i * dim_, dim_};
  }
  int label(std::size_t i) const { return labels_[i]; }
  std::span<const int> labels() const { return labels_; }
  std::span<const double> features() const { return features_; }

  // Rows selected by index, in the given order.
  Dataset Subset(std::span<const std::size_t> indices) const;

  // Per-class sample counts.
  std::vector<std::size_t> ClassHistogram() const;

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<double> features_;
  std::vector<int> labels_;
  std::size_t dim_;
  int num_classes_;
};

// Disjoint assignment of sample indices to clients.
struct PartitionPlan {
  std::vector<std::vector<std::size_t>> assignments;
  double concentration = 0.0;

  std::size_t num_clients() const { return assignments.size(); }
  // |D_k| / |D| for every client.
  std::vector<double> Fractions() const;
};

// Gaussian class clusters with unit-variance noise. Class means have norm
// class_sep; they are mutually orthogonal when num_classes <= dim and
// random directions otherwise. Labels cycle through the classes, so class
// counts differ by at most one.
Dataset GenerateSynthetic(int num_classes, std::size_t dim, std::size_t n,
                          double class_sep, std::uint64_t seed);

// Splits every class across clients with proportions drawn from
// Dirichlet(concentration). Clients left empty receive one sample from the
// currently largest client.
PartitionPlan DirichletPartition(const Dataset& data, std::size_t num_clients,
                                 double concentration, std::uint64_t seed);

// Seeded shuffle then split: the first test_fraction of rows (at least one)
// becomes the test set.
struct TrainTestSplit {
  Dataset train;
  Dataset test;
};
TrainTestSplit SplitTrainTest(const Dataset& data, double test_fraction,
                              std::uint64_t seed);

// Reads an IDX image file (magic 0x00000803) and label file (magic
// 0x00000801). Pixels are scaled to [0, 1] and flattened row-major. The label
// count is taken as num_classes = max label + 1, at least 2.
Dataset LoadIdx(const std::filesystem::path& images_path,
                const std::filesystem::path& labels_path,
                std::optional<std::size_t> limit = std::nullopt);

// CSV with header feature_0..feature_{d-1},label.
void WriteDatasetCsv(const Dataset& data, const std::filesystem::path& path);

}  // namespace seafl

#endif  // SEAFL_DATASET_H_
