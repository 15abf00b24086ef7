/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "leximax/swf.hpp"

using namespace leximax;

namespace {

std::vector<double> random_utilities(std::size_t n)
{
  std::mt19937_64 rng(n);
  std::uniform_real_distribution<double> dist(0.0, 100.0);
  std::vector<double> u(n);
  for (double& x : u) { x = dist(rng); }
  return u;
}

void BM_F1(benchmark::State& state)
{
  const UtilityVector u(random_utilities(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) { benchmark::DoNotOptimize(eval_F1(u, 10.0)); }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_F1)->RangeMultiplier(8)->Range(8, 1 << 15)->Complexity(benchmark::oNLogN);

void BM_Fk(benchmark::State& state)
{
  const auto n = static_cast<int>(state.range(0));
  const UtilityVector u(random_utilities(static_cast<std::size_t>(n)));
  for (auto _ : state) { benchmark::DoNotOptimize(eval_Fk(u, 10.0, n / 2 + 1)); }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Fk)->RangeMultiplier(8)->Range(8, 1 << 15)->Complexity(benchmark::oNLogN);

void BM_G1(benchmark::State& state)
{
  const auto n = static_cast<std::size_t>(state.range(0));
  const UtilityVector u(random_utilities(n));
  std::vector<int> sizes(n);
  for (std::size_t i = 0; i < n; ++i) { sizes[i] = 1 + static_cast<int>(i % 50); }
  const GroupProfile s(sizes);
  for (auto _ : state) { benchmark::DoNotOptimize(eval_G1(u, s, 10.0)); }
}
BENCHMARK(BM_G1)->RangeMultiplier(8)->Range(8, 1 << 12);

void BM_Gini(benchmark::State& state)
{
  const UtilityVector u(random_utilities(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) { benchmark::DoNotOptimize(gini(u)); }
}
BENCHMARK(BM_Gini)->RangeMultiplier(8)->Range(8, 1 << 12);

}  // namespace

BENCHMARK_MAIN();
