/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "leximax/healthcare.hpp"
#include "leximax/milp.hpp"
#include "leximax/sequential.hpp"
#include "leximax/solver.hpp"

using namespace leximax;

namespace {

// Treatment-funding instance of the same shape as the 33-group data, with
// the budget at roughly a third of the cost of funding everyone.
AllocationInstance treatment_instance(int groups)
{
  std::mt19937_64 rng(static_cast<unsigned>(groups));
  std::uniform_int_distribution<int> size(5, 56);
  std::uniform_real_distribution<double> cost(1000, 20000), gain(0.5, 10), base(0.9, 12);
  HealthcareInstance hc;
  double everyone = 0.0;
  for (int i = 0; i < groups; ++i) {
    HealthcareGroup g{"g" + std::to_string(i + 1), size(rng), cost(rng), gain(rng), base(rng)};
    everyone += g.s * g.c;
    hc.groups.push_back(g);
  }
  hc.budget = everyone / 3.0;
  return build_healthcare_model(hc);
}

TradeoffParams at(double delta)
{
  TradeoffParams p;
  p.delta = delta;
  return p;
}

void BM_StageOne(benchmark::State& state)
{
  const AllocationInstance inst = treatment_instance(static_cast<int>(state.range(0)));
  TradeoffParams p = at(2.0);
  p.bigM = compute_big_m(inst, p);
  const int n = inst.parties();
  LinearModel model = attach_feasible_set(encode_P1(n, inst.groups, p), inst.feasible);
  model = tighten_big_m(model, SequentialState::initial(n), p);
  long nodes = 0;
  for (auto _ : state) {
    const Solution sol = solve(model, SolverConfig{});
    nodes = sol.stats.nodes;
    benchmark::DoNotOptimize(sol.objective);
  }
  state.counters["nodes"] = static_cast<double>(nodes);
}
BENCHMARK(BM_StageOne)->Arg(10)->Arg(20)->Arg(33)->Unit(benchmark::kMillisecond);

// Whole sequence; delta/10 is the second argument so small deltas fit.
void BM_Sequence(benchmark::State& state)
{
  const AllocationInstance inst = treatment_instance(static_cast<int>(state.range(0)));
  const TradeoffParams p = at(static_cast<double>(state.range(1)) / 10.0);
  int K = 0;
  for (auto _ : state) {
    const SocialOutcome out = run_sequence(inst, p);
    K = out.K;
    benchmark::DoNotOptimize(out.total);
  }
  state.counters["K"] = K;
}
BENCHMARK(BM_Sequence)
    ->Args({12, 2})
    ->Args({12, 20})
    ->Args({12, 140})
    ->Args({33, 2})
    ->Args({33, 140})
    ->Unit(benchmark::kMillisecond)
    ->Iterations(3);

}  // namespace
