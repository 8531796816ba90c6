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

#include "oracles.hpp"

#include "patternlab/builtin.hpp"
#include "patternlab/errors.hpp"
#include "patternlab/solvers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace patternlab;

namespace {

Vec v1(double a) { return Vec::Constant(1, a); }

int switch_cell(const DiscretizedControl& c, double threshold) {
    for (int k = 0; k < c.size(); ++k)
        if (c.cells[k](0) < threshold) return k;
    return c.size();
}

}  // namespace

TEST(PatternTemplate, ValidatesAgainstControlSet) {
    const auto U = ControlValueSet::interval(0, 2);
    EXPECT_NO_THROW(PatternTemplate::from_values({2, 1, 0}).validate(U, 10));
    EXPECT_THROW(PatternTemplate::from_values({3, 0}).validate(U, 10), std::invalid_argument);
    EXPECT_THROW(PatternTemplate::from_values({}).validate(U, 10), std::invalid_argument);
    auto p = PatternTemplate::from_values({2, 1, 0});
    p.fixed_breakpoints = {std::nullopt};
    EXPECT_THROW(p.validate(U, 10), std::invalid_argument);
    p.fixed_breakpoints = {4.0, 3.0};
    EXPECT_THROW(p.validate(U, 10), std::invalid_argument);
    p.fixed_breakpoints = {1.0, std::nullopt};
    EXPECT_EQ(p.free_breakpoint_count(), 1);
}

TEST(PatternCost, MatchesClosedForms) {
    const auto prob = builtin::discounted_singular();
    const double t1 = std::log(1.5), t2 = 10 - std::log(2.0);
    const double j = pattern_cost(prob, {t1, t2}, {v1(2), v1(1), v1(0)}, 10.0, {}, 1e-12);
    EXPECT_NEAR(j, oracle::discounted_singular_cost(t1, t2, 10.0), 5e-9);
    const auto esc = builtin::finite_escape();
    EXPECT_EQ(pattern_cost(esc, {1.5}, {v1(1), v1(0)}, 2.0, {}, 1e-10), kInf);
}

TEST(SolveSwitchingTimes, LinearCostGrowthMatchesOracleRoot) {
    const auto prob = builtin::linear_cost_growth();
    const auto sol = solve_switching_times(prob, PatternTemplate::from_values({2, 0}), 10.0);
    ASSERT_EQ(sol.breakpoints.size(), 1u);
    EXPECT_NEAR(sol.breakpoints[0], oracle::linear_cost_growth_switch(10.0), 1e-6);
    EXPECT_NEAR(sol.cost, oracle::linear_cost_growth_cost(oracle::linear_cost_growth_switch(10.0), 10.0), 1e-7);
    EXPECT_TRUE(sol.converged);
    EXPECT_FALSE(sol.log.empty());
}

TEST(SolveSwitchingTimes, ShortHorizonStillSwitchesEarly) {
    const auto prob = builtin::linear_cost_growth();
    const auto sol = solve_switching_times(prob, PatternTemplate::from_values({2, 0}), 3.0);
    EXPECT_NEAR(sol.breakpoints[0], oracle::linear_cost_growth_switch(3.0), 1e-6);
    EXPECT_NEAR(sol.breakpoints[0], 0.7511, 1e-3);
}

TEST(SolveSwitchingTimes, SingularTemplateBreakpoints) {
    const auto prob = builtin::discounted_singular();
    const auto sol = solve_switching_times(prob, PatternTemplate::from_values({2, 1, 0}), 10.0);
    ASSERT_EQ(sol.breakpoints.size(), 2u);
    EXPECT_NEAR(sol.breakpoints[0], std::log(1.5), 1e-3);
    EXPECT_NEAR(sol.breakpoints[1], 10 - std::log(2.0), 1e-3);
    EXPECT_NEAR(sol.cost, oracle::discounted_singular_cost(std::log(1.5), 10 - std::log(2.0), 10.0), 1e-8);
}

TEST(SolveSwitchingTimes, FreePieceValueIsOptimized) {
    const auto prob = builtin::discounted_singular();
    auto pattern = PatternTemplate::from_values({2, 0.5, 0});
    pattern.pieces[1].free = true;
    const auto sol = solve_switching_times(prob, pattern, 10.0);
    EXPECT_NEAR(sol.values[1](0), 1.0, 1e-2);
    EXPECT_NEAR(sol.cost, oracle::discounted_singular_cost(std::log(1.5), 10 - std::log(2.0), 10.0), 1e-6);
}

TEST(SolveSwitchingTimes, SameSeedSameAnswer) {
    const auto prob = builtin::discounted_singular();
    SolverOptions o;
    o.seed = 7;
    const auto a = solve_switching_times(prob, PatternTemplate::from_values({2, 1, 0}), 6.0, o);
    const auto b = solve_switching_times(prob, PatternTemplate::from_values({2, 1, 0}), 6.0, o);
    EXPECT_EQ(a.breakpoints, b.breakpoints);
    EXPECT_EQ(a.cost, b.cost);
    std::ostringstream os;
    write_log_csv(os, a.log);
    EXPECT_EQ(os.str().rfind("iteration,cost,step,residual\n", 0), 0u);
}

TEST(SolveSwitchingTimes, BangBangGrowthSwitchesOneBeforeHorizon) {
    const auto prob = builtin::bang_bang_growth();
    const auto sol = solve_switching_times(prob, PatternTemplate::from_values({1, 0}), 5.0);
    EXPECT_NEAR(sol.breakpoints[0], 4.0, 1e-6);
    EXPECT_NEAR(sol.cost, -std::exp(4.0), 1e-6);
}

TEST(BruteForce, LinearCostGrowthGridScan) {
    const auto prob = builtin::linear_cost_growth();
    const auto r = brute_force_oracle(prob, PatternTemplate::from_values({2, 0}), 10.0, 1e-3);
    EXPECT_NEAR(r.tau, oracle::linear_cost_growth_switch(10.0), 1e-3);
    const auto s = brute_force_oracle(prob, PatternTemplate::from_values({2, 0}), 1.0, 1e-3);
    EXPECT_EQ(s.tau, 0.0);
    EXPECT_NEAR(s.cost, std::exp(1.0) - 1.0, 1e-8);
}

TEST(BruteForce, BangBangGrowth) {
    const auto r = brute_force_oracle(builtin::bang_bang_growth(), PatternTemplate::from_values({1, 0}), 5.0, 1e-3);
    EXPECT_NEAR(r.tau, 4.0, 1e-3);
    EXPECT_THROW(brute_force_oracle(builtin::discounted_singular(), PatternTemplate::from_values({2, 1, 0}), 5.0, 1e-2),
                 std::invalid_argument);
}

TEST(SolveDirect, RecoversBangBangSwitch) {
    const auto prob = builtin::linear_cost_growth();
    const double T = 10.0;
    const auto sol = solve_direct(prob, T, 200);
    const double ts = oracle::linear_cost_growth_switch(T);
    const int cell = switch_cell(sol.control, 1.0);
    EXPECT_LE(std::abs(cell - ts / sol.control.cell_width()), 1.0 + 1e-9);
    EXPECT_NEAR(sol.cost / oracle::linear_cost_growth_cost(ts, T), 1.0, 1e-3);
}

TEST(SolveDirect, ScalarRegulatorMatchesRiccatiCost) {
    const auto sol = solve_direct(builtin::scalar_lqr(), 5.0, 400);
    EXPECT_NEAR(sol.cost / oracle::scalar_lqr_cost(5.0), 1.0, 1e-4);
    EXPECT_FALSE(sol.line_search_failed);
}

TEST(SolveDirect, DecoupledQuadraticStaysAtZero) {
    auto prob = builtin::scalar_lqr();
    prob.system.input_matrix = [](double, const Vec&) { return Mat::Zero(1, 1); };
    prob.system.input_jacobian = [](double, const Vec&, const Vec&) { return Mat::Zero(1, 1); };
    prob.cost.ell1 = [](double, const Vec&) { return 0.0; };
    prob.cost.state_gradient = [](double, const Vec& x, const Vec&) { return Vec(Vec::Zero(x.size())); };
    DirectOptions o;
    o.initial = std::vector<Vec>(10, v1(0.8));
    const auto sol = solve_direct(prob, 2.0, 10, o);
    EXPECT_NEAR(sol.cost, 0.0, 1e-12);
    for (const auto& c : sol.control.cells) EXPECT_NEAR(c(0), 0.0, 1e-6);
    EXPECT_THROW(solve_direct(prob, 2.0, 0), std::invalid_argument);
}

TEST(DiscretizedControl, SignalPiecesFollowCells) {
    DiscretizedControl c{4.0, {v1(1), v1(2), v1(3), v1(4)}};
    const auto u = c.to_signal(v1(0));
    EXPECT_EQ(u.evaluate_scalar(0.5), 1.0);
    EXPECT_EQ(u.evaluate_scalar(3.0), 4.0);
    EXPECT_EQ(u.evaluate_scalar(4.0), 0.0);
}
