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

#include "benchmark/benchmark.h"
#include "seafl/dataset.h"
#include "seafl/model.h"

namespace seafl {
namespace {

void BM_LocalTrainEpoch(benchmark::State& state) {
  const bool mlp = state.range(0) != 0;
  const auto n = static_cast<std::size_t>(state.range(1));
  const Dataset data = GenerateSynthetic(10, 20, n, 3.0, 1);
  const ModelSpec spec{mlp ? ModelKind::kMlp : ModelKind::kLogistic, 20,
                       mlp ? 32u : 0u, 10};
  const ParamVector start = InitModel(spec, 1);
  const TrainConfig cfg{1, 0.1, 16, 7};
  for (auto _ : state) {
    benchmark::DoNotOptimize(LocalTrain(spec, start, data, cfg));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_LocalTrainEpoch)
    ->ArgNames({"mlp", "samples"})
    ->Args({0, 200})
    ->Args({1, 200})
    ->Args({1, 2000});

void BM_Evaluate(benchmark::State& state) {
  const Dataset data = GenerateSynthetic(10, 20, 2200, 3.0, 2);
  const ModelSpec spec{ModelKind::kMlp, 20, 32, 10};
  const ParamVector params = InitModel(spec, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(LossAndAccuracy(spec, params, data));
  }
}
BENCHMARK(BM_Evaluate);

}  // namespace
}  // namespace seafl
