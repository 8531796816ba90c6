/*
 Copyright 2026 The patternlab Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "patternlab/builtin.hpp"
#include "patternlab/expr.hpp"
#include "patternlab/regulator.hpp"
#include "patternlab/solvers.hpp"

#include <benchmark/benchmark.h>

using namespace patternlab;

static void BM_IntegrateSwitched(benchmark::State& state) {
    const auto p = builtin::linear_cost_growth();
    const auto u = ControlSignal::scalar({0, 4.3, 10}, {2, 0});
    for (auto _ : state) benchmark::DoNotOptimize(integrate(p.system, u, p.x0, 10.0));
}
BENCHMARK(BM_IntegrateSwitched);

static void BM_PatternCost(benchmark::State& state) {
    const auto p = builtin::discounted_singular();
    const std::vector<Vec> values{Vec::Constant(1, 2), Vec::Constant(1, 1), Vec::Constant(1, 0)};
    for (auto _ : state) benchmark::DoNotOptimize(pattern_cost(p, {0.4, 9.3}, values, 10.0, {}, 1e-10));
}
BENCHMARK(BM_PatternCost);

static void BM_SolveSwitchingTimes(benchmark::State& state) {
    const auto p = builtin::discounted_singular();
    const auto pattern = PatternTemplate::from_values({2, 1, 0});
    for (auto _ : state) benchmark::DoNotOptimize(solve_switching_times(p, pattern, 10.0));
}
BENCHMARK(BM_SolveSwitchingTimes)->Unit(benchmark::kMillisecond);

static void BM_SolveDirect(benchmark::State& state) {
    const auto p = builtin::scalar_lqr();
    DirectOptions o;
    o.max_iters = 50;
    for (auto _ : state) benchmark::DoNotOptimize(solve_direct(p, 5.0, static_cast<int>(state.range(0)), o));
}
BENCHMARK(BM_SolveDirect)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_RiccatiFinite(benchmark::State& state) {
    const Mat one = Mat::Constant(1, 1, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(riccati_finite(Mat::Zero(1, 1), one, one, one, 10.0));
}
BENCHMARK(BM_RiccatiFinite);

static void BM_ParseAndEvaluate(benchmark::State& state) {
    const Vec x = Vec::Constant(1, 0.7), u = Vec::Constant(1, 1.0);
    for (auto _ : state) {
        const auto e = Expression::parse("(abs(u1)/3 + abs(x1)) * exp(-2*t)");
        benchmark::DoNotOptimize(e(0.3, x, u));
    }
}
BENCHMARK(BM_ParseAndEvaluate);

static void BM_Evaluate(benchmark::State& state) {
    const auto e = Expression::parse("(abs(u1)/3 + abs(x1)) * exp(-2*t)");
    const Vec x = Vec::Constant(1, 0.7), u = Vec::Constant(1, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(e(0.3, x, u));
}
BENCHMARK(BM_Evaluate);
BENCHMARK_MAIN();
