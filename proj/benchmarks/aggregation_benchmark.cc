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

#include <memory>
#include <random>
#include <vector>

#include "benchmark/benchmark.h"
#include "seafl/aggregator.h"
#include "seafl/event_queue.h"

namespace seafl {
namespace {

ParamVector RandomParams(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = normal(rng);
  return ParamVector(std::move(v));
}

void BM_SeaflAggregate(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto dim = static_cast<std::size_t>(state.range(1));
  std::mt19937_64 rng(1);
  const ParamVector global = RandomParams(dim, rng);
  std::vector<BufferedUpdate> buffer;
  for (std::size_t i = 0; i < k; ++i) {
    buffer.push_back(BufferedUpdate{
        UpdateRecord{static_cast<int>(i), RandomParams(dim, rng),
                     static_cast<int>(i % 5), 100 + i, 5, 0.0},
        std::make_shared<const ParamVector>(RandomParams(dim, rng))});
  }
  SeaflHyper hyper;
  for (auto _ : state) {
    benchmark::DoNotOptimize(SeaflAggregate(buffer, global, 10, hyper));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(k * dim));
}
BENCHMARK(BM_SeaflAggregate)
    ->Args({10, 1000})
    ->Args({10, 100000})
    ->Args({50, 100000});

void BM_FedBuffAggregate(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto dim = static_cast<std::size_t>(state.range(1));
  std::mt19937_64 rng(2);
  const ParamVector global = RandomParams(dim, rng);
  std::vector<BufferedUpdate> buffer;
  for (std::size_t i = 0; i < k; ++i) {
    buffer.push_back(BufferedUpdate{
        UpdateRecord{static_cast<int>(i), RandomParams(dim, rng), 0, 100, 5,
                     0.0},
        nullptr});
  }
  SeaflHyper hyper;
  for (auto _ : state) {
    benchmark::DoNotOptimize(FedBuffAggregate(buffer, global, hyper));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(k * dim));
}
BENCHMARK(BM_FedBuffAggregate)->Args({10, 100000});

void BM_EventQueue(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1000.0);
  std::vector<double> times(n);
  for (auto& t : times) t = u(rng);
  for (auto _ : state) {
    EventQueue q;
    for (std::size_t i = 0; i < n; ++i) {
      q.Push(SimEvent{times[i], 0, EventKind::kEpochComplete,
                      static_cast<int>(i)});
    }
    while (!q.empty()) benchmark::DoNotOptimize(q.Pop());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_EventQueue)->Arg(1000)->Arg(100000);

}  // namespace
}  // namespace seafl
