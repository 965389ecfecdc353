//
// Copyright 2026 The impmech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Throughput of the hot paths: softmax over scores, the exhaustive DP audit,
// the continuous grid mechanism and the exact dyadic loss.

#include <vector>

#include "benchmark/benchmark.h"
#include "impmech/continuous_facility.h"
#include "impmech/exponential.h"
#include "impmech/facility.h"
#include "impmech/random.h"

namespace impmech {
namespace {

void BM_ExponentialFromScores(benchmark::State& state) {
  RandomStream rng(1);
  std::vector<double> scores(state.range(0));
  for (double& s : scores) s = rng.Uniform();
  for (auto _ : state) {
    benchmark::DoNotOptimize(ExponentialDistributionFromScores(scores, 50.0));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ExponentialFromScores)->RangeMultiplier(8)->Range(8, 1 << 15);

void BM_AuditDp(benchmark::State& state) {
  const GridFacilityInstance inst =
      *BuildGridFacilityEnv(static_cast<int>(state.range(0)), 2, 2);
  const Mechanism mech = ExponentialMechanism(inst.objective, inst.env, 0.5);
  for (auto _ : state) {
    auto report = AuditDp(mech, inst.env, 0.5);
    if (!report.ok()) state.SkipWithError("audit failed");
    benchmark::DoNotOptimize(report);
  }
}
BENCHMARK(BM_AuditDp)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_GridExpMech(benchmark::State& state) {
  const FacilityGrid grid = *FacilityGrid::Create(
      static_cast<int>(state.range(1)), 1.0 / state.range(0));
  RandomStream rng(2);
  std::vector<double> t(1000);
  for (double& x : t) x = rng.Uniform();
  for (auto _ : state) {
    benchmark::DoNotOptimize(ContinuousExpMechDistribution(grid, t, 0.01));
  }
  state.SetItemsProcessed(state.iterations() * grid.size());
}
BENCHMARK(BM_GridExpMech)
    ->Args({1024, 1})
    ->Args({64, 2})
    ->Args({256, 2})
    ->Unit(benchmark::kMicrosecond);

void BM_DyadicLoss(benchmark::State& state) {
  const DyadicCommitment c =
      *DyadicCommitment::Create(static_cast<int>(state.range(0)), 2);
  RandomStream rng(3);
  for (auto _ : state) {
    const double t = rng.Uniform(), b = rng.Uniform();
    benchmark::DoNotOptimize(c.ExpectedLoss(t, b));
  }
}
BENCHMARK(BM_DyadicLoss)->DenseRange(1, 8, 3);

}  // namespace
}  // namespace impmech

BENCHMARK_MAIN();
