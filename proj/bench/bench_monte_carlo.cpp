// Copyright 2026 The PPSC Gossip Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference loop vs OpenMP trial split for the Monte Carlo kernels.
// Arg 0 selects the execution mode: 0 = serial, 1 = parallel. Wall time, since
// CPU time of the calling thread undercounts the OpenMP workers.

#include <filesystem>

#include <benchmark/benchmark.h>

#include "ppsc/harness/config.hpp"
#include "ppsc/harness/experiments.hpp"
#include "ppsc/monte_carlo.hpp"
#include "ppsc/planner.hpp"
#include "ppsc/privacy_audit.hpp"

namespace {

using namespace ppsc;

Execution Mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::kSerial : Execution::kParallel;
}

const harness::ExperimentConfig& AverageConfig() {
  static const auto cfg = harness::LoadConfig(
      (std::filesystem::path(PPSC_SOURCE_DIR) / "configs" / "average.json").string());
  return cfg;
}

void BM_FirstCoverTimes(benchmark::State& state) {
  const auto gp = AverageConfig().BuildPrivateGraph();
  const std::int64_t trials = state.range(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(FirstCoverTimes(gp, 60, trials, 7, Mode(state)));
  }
  state.SetItemsProcessed(state.iterations() * trials);
  state.counters["threads"] = Mode(state) == Execution::kSerial ? 1 : ParallelWidth();
}
BENCHMARK(BM_FirstCoverTimes)
    ->ArgNames({"parallel", "trials"})
    ->ArgsProduct({{0, 1}, {10000, 100000}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

void BM_SweepConsensus(benchmark::State& state) {
  const auto& cfg = AverageConfig();
  const auto g = cfg.BuildPublicGraph();
  const auto gp = cfg.BuildPrivateGraph();
  Budget budget = cfg.budget;
  budget.epsilon = 0.1;
  const Plan plan =
      PlanConsensus(budget, cfg.task.data.squaredNorm(), g, gp, cfg.BuildPlannerOptions());
  const std::int64_t trials = state.range(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(harness::SweepConsensus(cfg.task.data, g, gp, plan, budget.nu,
                                                     trials, 7, "bench", Mode(state)));
  }
  state.SetItemsProcessed(state.iterations() * trials);
  state.counters["threads"] = Mode(state) == Execution::kSerial ? 1 : ParallelWidth();
}
BENCHMARK(BM_SweepConsensus)
    ->ArgNames({"parallel", "trials"})
    ->ArgsProduct({{0, 1}, {50, 200}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
