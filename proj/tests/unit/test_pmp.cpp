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
#include "patternlab/pmp.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace patternlab;

namespace {

const double kLn15 = std::log(1.5);
const double kLn2 = std::log(2.0);

struct Extremal {
    Trajectory traj;
    CostateTrajectory p;
    SwitchingFunction phi;
};

Extremal along(const ProblemInstance& prob, const ControlSignal& u, double T) {
    IntegrationOptions io;
    io.rtol = 1e-12;
    io.atol = 1e-14;
    Extremal e;
    e.traj = integrate(prob.system, u, prob.x0, T, io);
    e.p = costate_integrate(prob, e.traj, u, T, CostateOptions{1e-12, 1e-22});
    e.phi = switching_function(prob, e.traj, e.p);
    return e;
}

ControlSignal singular_candidate(double T) {
    return ControlSignal::scalar({0, kLn15, T - kLn2, T}, {2, 1, 0});
}

}  // namespace

TEST(Costate, DiscountedTailPieceClosedForm) {
    const auto prob = builtin::discounted_singular();
    const double T = 10.0;
    const auto idle = along(prob, ControlSignal::constant(0.0, T), T);
    EXPECT_NEAR(idle.p.at(9.0)(0) / (std::exp(-18.0) - std::exp(-19.0)), 1.0, 1e-6);
    const auto e = along(prob, singular_candidate(T), T);
    EXPECT_NEAR(e.p.at(9.5)(0) / (std::exp(-19.0) - std::exp(-19.5)), 1.0, 1e-6);
    EXPECT_EQ(e.p.at(T)(0), 0.0);
}

TEST(Costate, SingularArcHalfDiscount) {
    const auto prob = builtin::discounted_singular();
    const auto e = along(prob, singular_candidate(10.0), 10.0);
    for (double t : {1.0, 3.0, 5.0, 8.0}) EXPECT_NEAR(e.p.at(t)(0) / (0.5 * std::exp(-2 * t)), 1.0, 1e-6) << t;
}

TEST(Costate, VanishesWithoutStateSource) {
    auto prob = builtin::scalar_lqr();
    prob.cost.ell1 = [](double, const Vec&) { return 0.0; };
    prob.cost.state_gradient = [](double, const Vec& x, const Vec&) { return Vec(Vec::Zero(x.size())); };
    const auto u = ControlSignal::scalar({0, 1, 3}, {0.5, -2});
    const auto traj = integrate(prob.system, u, prob.x0, 3.0);
    const auto p = costate_integrate(prob, traj, u, 3.0);
    for (double t : {0.0, 1.0, 2.5}) EXPECT_EQ(p.at(t)(0), 0.0);
}

TEST(Costate, HamiltonianIsCostPlusCostateTimesRate) {
    const auto prob = builtin::linear_cost_growth();
    const Vec x = Vec::Constant(1, 2.0), p = Vec::Constant(1, -0.5), u = Vec::Constant(1, 2.0);
    EXPECT_DOUBLE_EQ(hamiltonian(prob, 0.0, x, p, u), 8.0 + 2.0 + (-0.5) * (-2.0));
}

TEST(SwitchingFunction, LinearCostGrowthZeroAtOptimalSwitch) {
    const auto prob = builtin::linear_cost_growth();
    const double T = 10.0;
    const double ts = oracle::linear_cost_growth_switch(T);
    const auto e = along(prob, ControlSignal::scalar({0, ts, T}, {2, 0}), T);
    ASSERT_EQ(e.phi.zero_crossings[0].size(), 1u);
    EXPECT_NEAR(e.phi.zero_crossings[0][0], ts, 1e-6);
    EXPECT_LT(e.phi.evaluate(1.0)(0), 0.0);
    EXPECT_GT(e.phi.evaluate(8.0)(0), 0.0);
}

TEST(SwitchingFunction, LinearCostGrowthDerivativeIsState) {
    const auto prob = builtin::linear_cost_growth();
    const double T = 10.0;
    const auto e = along(prob, ControlSignal::scalar({0, oracle::linear_cost_growth_switch(T), T}, {2, 0}), T);
    const double h = 1e-4;
    for (double t : {0.7, 2.0, 3.9, 6.0, 9.0}) {
        const double d = (e.phi.evaluate(t + h)(0) - e.phi.evaluate(t - h)(0)) / (2 * h);
        const double x = e.traj.at(t)(0);
        EXPECT_NEAR(d, x, 1e-5 * std::max(1.0, std::abs(x))) << t;
    }
}

TEST(SwitchingFunction, DiscountedDerivativeFormula) {
    const auto prob = builtin::discounted_singular();
    const auto e = along(prob, singular_candidate(10.0), 10.0);
    const double h = 1e-4;
    for (double t : {0.2, 9.5, 9.8}) {
        const double d = (e.phi.evaluate(t + h)(0) - e.phi.evaluate(t - h)(0)) / (2 * h);
        EXPECT_NEAR(d, std::exp(-2 * t) * (e.traj.at(t)(0) - 2.0 / 3.0), 1e-5) << t;
    }
}

TEST(SwitchingFunction, BangBangGrowthSwitchesOneBeforeHorizon) {
    const auto prob = builtin::bang_bang_growth();
    for (double T : {3.0, 5.0, 8.0}) {
        const auto e = along(prob, ControlSignal::scalar({0, T - 1, T}, {1, 0}), T);
        ASSERT_EQ(e.phi.zero_crossings[0].size(), 1u) << T;
        EXPECT_NEAR(e.phi.zero_crossings[0][0], T - 1, 1e-6);
    }
}

TEST(SwitchingFunction, DetectsDiscountedSingularInterval) {
    const auto prob = builtin::discounted_singular();
    const auto e = along(prob, singular_candidate(10.0), 10.0);
    ASSERT_EQ(e.phi.singular_intervals[0].size(), 1u);
    const auto [a, b] = e.phi.singular_intervals[0][0];
    EXPECT_NEAR(a, kLn15, 5e-3);
    EXPECT_NEAR(b, 10 - kLn2, 5e-3);
}

TEST(VerifyExtremal, OptimalBangBangIsConsistent) {
    const auto prob = builtin::linear_cost_growth();
    const double T = 10.0;
    const auto rep = verify_extremal(prob, ControlSignal::scalar({0, oracle::linear_cost_growth_switch(T), T}, {2, 0}), T);
    EXPECT_TRUE(rep.consistent);
    EXPECT_LT(rep.max_sign_violation, 1e-6);
}

TEST(VerifyExtremal, FixedOffsetSwitchIsInconsistent) {
    const auto prob = builtin::linear_cost_growth();
    const auto rep = verify_extremal(prob, ControlSignal::scalar({0, 6, 10}, {2, 0}), 10.0);
    EXPECT_FALSE(rep.consistent);
}

TEST(VerifyExtremal, SingularCandidateIsConsistent) {
    const auto prob = builtin::discounted_singular();
    const auto rep = verify_extremal(prob, singular_candidate(10.0), 10.0);
    EXPECT_TRUE(rep.consistent);
    ASSERT_EQ(rep.singular_arc_residuals.size(), 1u);
    EXPECT_LT(rep.singular_arc_residuals[0], 1e-6);
}

TEST(VerifyExtremal, ZeroControlViolatesAlmostEverywhere) {
    const auto prob = builtin::linear_cost_growth();
    const auto rep = verify_extremal(prob, ControlSignal::constant(0.0, 10.0), 10.0);
    EXPECT_FALSE(rep.consistent);
    EXPECT_NEAR(rep.violation_duration, std::log(std::exp(10.0) - 4.0), 5e-3);
}

TEST(VerifyExtremal, FullSpaceIsInapplicable) {
    EXPECT_THROW(verify_extremal(builtin::scalar_lqr(), ControlSignal::constant(0.0, 1.0), 1.0), InapplicableError);
}
