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
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "seafl/errors.h"
#include "seafl/model.h"

namespace seafl {
namespace {

namespace fs = std::filesystem;

double TrainedAccuracy(const Dataset& data, int epochs, std::uint64_t seed) {
  const TrainTestSplit split = SplitTrainTest(data, 0.5, seed);
  const ModelSpec spec{ModelKind::kLogistic, data.dim(), 0, data.num_classes()};
  const TrainOutcome out = LocalTrain(spec, InitModel(spec, seed), split.train,
                                      {epochs, 0.1, 16, seed});
  return LossAndAccuracy(spec, out.params, split.test).accuracy;
}

TEST(Dataset, ValidatesRows) {
  EXPECT_THROW(Dataset({}, {}, 2, 2), DataError);
  EXPECT_THROW(Dataset({1.0, 2.0}, {2}, 2, 2), DataError);
  EXPECT_THROW(Dataset({1.0, 2.0, 3.0}, {0}, 2, 2), DataError);
  EXPECT_THROW(Dataset({1.0, std::nan("")}, {0}, 2, 2), DataError);
}

TEST(Synthetic, Deterministic) {
  EXPECT_EQ(GenerateSynthetic(5, 7, 300, 1.5, 42),
            GenerateSynthetic(5, 7, 300, 1.5, 42));
  EXPECT_FALSE(GenerateSynthetic(5, 7, 300, 1.5, 42) ==
               GenerateSynthetic(5, 7, 300, 1.5, 43));
}

TEST(Synthetic, BalancedClasses) {
  const Dataset d = GenerateSynthetic(7, 3, 1003, 1.0, 1);
  const auto hist = d.ClassHistogram();
  const auto [lo, hi] = std::minmax_element(hist.begin(), hist.end());
  EXPECT_LE(*hi - *lo, 1u);
}

TEST(Synthetic, InvalidSizes) {
  EXPECT_THROW(GenerateSynthetic(1, 3, 10, 1.0, 1), ConfigError);
  EXPECT_THROW(GenerateSynthetic(3, 0, 10, 1.0, 1), ConfigError);
  EXPECT_THROW(GenerateSynthetic(3, 3, 2, 1.0, 1), ConfigError);
  EXPECT_THROW(GenerateSynthetic(3, 3, 10, -1.0, 1), ConfigError);
}

TEST(Synthetic, NoSeparationIsChance) {
  const Dataset d = GenerateSynthetic(4, 5, 4000, 0.0, 17);
  EXPECT_NEAR(TrainedAccuracy(d, 5, 3), 0.25, 0.05);
}

TEST(Synthetic, WideSeparationIsLearnable) {
  const Dataset d = GenerateSynthetic(2, 2, 1000, 10.0, 17);
  EXPECT_GE(TrainedAccuracy(d, 20, 3), 0.99);
}

void ExpectSetPartition(const PartitionPlan& plan, std::size_t n) {
  std::vector<int> seen(n, 0);
  for (const auto& a : plan.assignments) {
    EXPECT_FALSE(a.empty());
    for (std::size_t i : a) {
      ASSERT_LT(i, n);
      ++seen[i];
    }
  }
  for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(seen[i], 1) << "index " << i;
}

TEST(Dirichlet, SetPartitionProperty) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const int c = 2 + static_cast<int>(rng() % 9);
    const std::size_t n = static_cast<std::size_t>(c) + rng() % 400;
    const std::size_t clients = 1 + rng() % std::min<std::size_t>(n, 50);
    const double conc = std::pow(10.0, -2.0 + 4.0 * (rng() % 1000) / 1000.0);
    const Dataset d = GenerateSynthetic(c, 2, n, 1.0, trial);
    const PartitionPlan plan = DirichletPartition(d, clients, conc, trial);
    ASSERT_EQ(plan.num_clients(), clients);
    ExpectSetPartition(plan, n);
    double sum = 0.0;
    for (double f : plan.Fractions()) sum += f;
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(Dirichlet, Deterministic) {
  const Dataset d = GenerateSynthetic(10, 2, 2000, 1.0, 1);
  EXPECT_EQ(DirichletPartition(d, 20, 0.3, 9).assignments,
            DirichletPartition(d, 20, 0.3, 9).assignments);
}

TEST(Dirichlet, LargeConcentrationIsNearlyIid) {
  const Dataset d = GenerateSynthetic(10, 2, 20000, 1.0, 1);
  const PartitionPlan plan = DirichletPartition(d, 10, 1e6, 5);
  for (const auto& a : plan.assignments) {
    const auto hist = d.Subset(a).ClassHistogram();
    const double expected = static_cast<double>(a.size()) / 10.0;
    for (std::size_t h : hist) {
      EXPECT_LE(std::abs(static_cast<double>(h) - expected), 0.2 * expected);
    }
  }
}

TEST(Dirichlet, SmallConcentrationIsSkewed) {
  const Dataset d = GenerateSynthetic(10, 2, 5000, 1.0, 1);
  std::vector<double> top_share;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const PartitionPlan plan = DirichletPartition(d, 10, 0.1, seed);
    double best = 0.0;
    for (const auto& a : plan.assignments) {
      const auto hist = d.Subset(a).ClassHistogram();
      best = std::max(best, static_cast<double>(*std::max_element(
                                hist.begin(), hist.end())) /
                                static_cast<double>(a.size()));
    }
    top_share.push_back(best);
  }
  std::sort(top_share.begin(), top_share.end());
  EXPECT_GT((top_share[4] + top_share[5]) / 2.0, 0.6);
}

TEST(Dirichlet, TooManyClients) {
  const Dataset d = GenerateSynthetic(2, 2, 10, 1.0, 1);
  EXPECT_THROW(DirichletPartition(d, 11, 1.0, 1), ConfigError);
  EXPECT_THROW(DirichletPartition(d, 2, 0.0, 1), ConfigError);
}

TEST(Dirichlet, EveryClientNonemptyWhenClientsEqualRows) {
  const Dataset d = GenerateSynthetic(3, 2, 30, 1.0, 1);
  const PartitionPlan plan = DirichletPartition(d, 30, 0.05, 4);
  ExpectSetPartition(plan, 30);
}

TEST(Split, DisjointAndSized) {
  const Dataset d = GenerateSynthetic(3, 2, 100, 1.0, 1);
  const TrainTestSplit s = SplitTrainTest(d, 0.2, 3);
  EXPECT_EQ(s.train.size() + s.test.size(), 100u);
  EXPECT_EQ(s.test.size(), 20u);
  EXPECT_THROW(SplitTrainTest(d, 1.0, 3), ConfigError);
}

class IdxTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("seafl_idx_" + std::string(::testing::UnitTest::GetInstance()
                                           ->current_test_info()
                                           ->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path Write(const std::string& name, const std::vector<std::uint8_t>& b) {
    const fs::path p = dir_ / name;
    std::ofstream out(p, std::ios::binary);
    out.write(reinterpret_cast<const char*>(b.data()),
              static_cast<std::streamsize>(b.size()));
    return p;
  }

  // Three 2x2 images, labels 0, 2, 1.
  fs::path Images(std::uint8_t magic_low = 0x03) {
    return Write("images", {0x00, 0x00, 0x08, magic_low,  // magic
                            0x00, 0x00, 0x00, 0x03,       // count
                            0x00, 0x00, 0x00, 0x02,       // rows
                            0x00, 0x00, 0x00, 0x02,       // cols
                            0, 1, 254, 255,               // image 0
                            255, 255, 0, 0,               // image 1
                            10, 20, 30, 40});             // image 2
  }
  fs::path Labels(std::uint8_t count = 3) {
    std::vector<std::uint8_t> b{0x00, 0x00, 0x08, 0x01, 0x00, 0x00, 0x00, count};
    const std::uint8_t ys[] = {0, 2, 1};
    for (std::uint8_t i = 0; i < count; ++i) b.push_back(ys[i]);
    return Write("labels", b);
  }

  fs::path dir_;
};

TEST_F(IdxTest, HandCraftedImages) {
  const Dataset d = LoadIdx(Images(), Labels());
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d.dim(), 4u);
  EXPECT_EQ(d.num_classes(), 3);
  EXPECT_EQ(d.label(0), 0);
  EXPECT_EQ(d.label(1), 2);
  EXPECT_EQ(d.label(2), 1);
  EXPECT_DOUBLE_EQ(d.row(0)[0], 0.0);
  EXPECT_DOUBLE_EQ(d.row(0)[1], 1.0 / 255.0);
  EXPECT_DOUBLE_EQ(d.row(0)[3], 1.0);
  EXPECT_DOUBLE_EQ(d.row(2)[2], 30.0 / 255.0);
  for (double x : d.features()) {
    EXPECT_GE(x, 0.0);
    EXPECT_LE(x, 1.0);
  }
}

TEST_F(IdxTest, Limit) {
  EXPECT_EQ(LoadIdx(Images(), Labels(), 2).size(), 2u);
  EXPECT_THROW(LoadIdx(Images(), Labels(), 0), DataError);
}

TEST_F(IdxTest, BadMagic) {
  EXPECT_THROW(LoadIdx(Images(0x01), Labels()), FormatError);
}

TEST_F(IdxTest, CountMismatch) {
  EXPECT_THROW(LoadIdx(Images(), Labels(2)), FormatError);
}

TEST_F(IdxTest, Truncated) {
  const fs::path p = Write("short", {0x00, 0x00, 0x08, 0x03, 0x00, 0x00, 0x00,
                                     0x03, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00,
                                     0x00, 0x02, 1, 2});
  EXPECT_THROW(LoadIdx(p, Labels()), FormatError);
}

TEST_F(IdxTest, MissingFile) {
  EXPECT_THROW(LoadIdx(dir_ / "nope", Labels()), IoError);
}

TEST_F(IdxTest, CsvExport) {
  const Dataset d({0.5, 1.0, 0.0, 2.0}, {1, 0}, 2, 2);
  const fs::path p = dir_ / "d.csv";
  WriteDatasetCsv(d, p);
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "feature_0,feature_1,label\n0.5,1,1\n0,2,0\n");
}

}  // namespace
}  // namespace seafl
