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
#include "patternlab/costs.hpp"
#include "patternlab/errors.hpp"
#include "patternlab/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace patternlab;

namespace {

Vec v1(double a) { return Vec::Constant(1, a); }

double cost_of(const ProblemInstance& p, const ControlSignal& u, double T) {
    return evaluate_cost(p.cost, integrate(p.system, u, p.x0, T), u, T);
}

}  // namespace

TEST(EvaluateCost, DiscountedClosedForms) {
    const auto p = builtin::discounted_singular();
    EXPECT_NEAR(cost_of(p, ControlSignal::constant(0.0, 10.0), 10.0), 0.99995460007, 1e-6);
    EXPECT_NEAR(cost_of(p, ControlSignal::constant(2.0, 1.0), 1.0), 0.604959, 1e-6);
    for (double T : {1.0, 5.0, 10.0}) {
        EXPECT_NEAR(cost_of(p, ControlSignal::constant(0.0, T), T), oracle::discounted_cost_u0(T), 1e-8);
        EXPECT_NEAR(cost_of(p, ControlSignal::constant(2.0, T), T), oracle::discounted_cost_u2(T), 1e-8);
    }
}

TEST(EvaluateCost, ZeroIntegrandIsZero) {
    auto p = builtin::linear_cost_growth();
    p.cost = RunningCost{};
    EXPECT_EQ(cost_of(p, ControlSignal::scalar({0, 1, 3}, {2, 0}), 3.0), 0.0);
}

TEST(EvaluateCost, SignIndefiniteCostDecreasesLinearly) {
    const auto p = builtin::bang_bang_growth();
    for (double T : {1.0, 7.0, 20.0}) EXPECT_NEAR(cost_of(p, ControlSignal::constant(0.0, T), T), -T, 1e-9);
}

TEST(EvaluateCost, SwitchedControlMatchesClosedForm) {
    const auto p = builtin::linear_cost_growth();
    for (double tau : {0.0, 2.5, 4.3}) {
        const auto u = ControlSignal::scalar({0, tau, 10}, {2, 0});
        EXPECT_NEAR(cost_of(p, u, 10.0) / oracle::linear_cost_growth_cost(tau, 10.0), 1.0, 1e-8);
    }
}

TEST(EvaluateCost, PartialWindowAndBlowUp) {
    const auto p = builtin::discounted_singular();
    const auto u = ControlSignal::constant(0.0, 4.0);
    const auto traj = integrate(p.system, u, p.x0, 4.0);
    const double part = evaluate_cost(p.cost, traj, u, 1.0, 3.0, 1e-12);
    EXPECT_NEAR(part, std::exp(-1.0) - std::exp(-3.0), 1e-8);

    const auto q = builtin::finite_escape();
    const auto w = ControlSignal::constant(1.0, 1.0);
    const auto blown = integrate(q.system, w, q.x0, 2.0);
    EXPECT_THROW(evaluate_cost(q.cost, blown, w, 2.0), BlowUpError);
}

TEST(EvaluateCost, StateConstraintIndicatorGivesInfinity) {
    auto p = builtin::discounted_singular();
    const auto ind = box_constraint_indicator(Box{v1(-2), v1(2)});
    p.cost.ell1 = ind;
    EXPECT_EQ(cost_of(p, ControlSignal::constant(0.0, 3.0), 3.0), kInf);
    EXPECT_TRUE(std::isfinite(cost_of(p, ControlSignal::constant(0.0, 0.5), 0.5)));
}

TEST(Quadrature, MatchesSimpsonOracle) {
    auto f = [](double t) { return std::exp(-t) * std::sin(3 * t) + std::abs(t - 1.2); };
    const auto r = integrate_adaptive(f, 0.0, 4.0, 1e-12, {1.2});
    EXPECT_NEAR(r.value, oracle::simpson(f, 0.0, 1.2) + oracle::simpson(f, 1.2, 4.0), 1e-10);
    EXPECT_FALSE(r.infinite);
}

TEST(Quadrature, IsolatedInfiniteSampleIsNotAnInfiniteIntegral) {
    auto f = [](double t) { return t == 0.5 ? kInf : 1.0; };
    const auto r = integrate_adaptive(f, 0.0, 1.0, 1e-12, {0.5});
    EXPECT_FALSE(r.infinite);
    EXPECT_NEAR(r.value, 1.0, 1e-12);
    auto g = [](double t) { return t > 0.3 ? kInf : 1.0; };
    EXPECT_TRUE(integrate_adaptive(g, 0.0, 1.0, 1e-12).infinite);
}

TEST(GrowthCondition, QuadraticFormWithSmallestEigenvalue) {
    Mat R(2, 2);
    R << 2, 1, 1, 3;
    const double alpha = Eigen::SelfAdjointEigenSolver<Mat>(R).eigenvalues()(0);
    RunningCost c;
    c.ell2 = [R](double, const Vec&, const Vec& u) { return u.dot(R * u); };
    c.growth = GrowthBound{alpha, [](double) { return 0.0; }, 0.0};
    std::vector<Vec> us;
    for (double a : linspace(-3, 3, 13))
        for (double b : linspace(-3, 3, 13)) {
            Vec u(2);
            u << a, b;
            us.push_back(u);
        }
    const auto rep = check_growth_condition(c, 2.0, {0.0}, {Vec::Zero(1)}, us);
    EXPECT_TRUE(rep.ok);
    EXPECT_GE(rep.worst_margin, -1e-12);
    EXPECT_NEAR(rep.worst_margin, 0.0, 1e-12);
}

TEST(GrowthCondition, AbsoluteValueFailsQuadraticGrowth) {
    RunningCost c;
    c.ell2 = [](double, const Vec&, const Vec& u) { return std::abs(u(0)); };
    c.growth = GrowthBound{};
    const auto rep = check_growth_condition(c, 2.0, {0.0}, {v1(0)}, {v1(0), v1(0.5), v1(1), v1(2)});
    EXPECT_FALSE(rep.ok);
    EXPECT_EQ(rep.witness.u(0), 2.0);
    EXPECT_NEAR(rep.worst_margin, -2.0, 1e-12);
}

TEST(GrowthCondition, InfiniteExponentIsInapplicable) {
    const auto p = builtin::linear_cost_growth();
    RunningCost c = p.cost;
    c.growth = GrowthBound{};
    EXPECT_THROW(check_growth_condition(c, kInf, {0.0}, {v1(0)}, {v1(1)}), InapplicableError);
}

TEST(Domination, ZeroReferenceCostIsDominatedByZero) {
    const auto p = builtin::linear_cost_growth();
    const auto rep = check_reference_cost_domination(p.cost, p.u_star, linspace(0, 10, 11));
    EXPECT_TRUE(rep.ok);
    EXPECT_EQ(rep.integral_of_tail, 0.0);
}

TEST(Domination, DiscountedBoundHasExponentialTail) {
    RunningCost c;
    c.ell2 = [](double t, const Vec& x, const Vec& u) { return std::exp(-t) * (x(0) * x(0) + u(0)); };
    c.dominator = Dominator{Box{v1(-2), v1(2)}, [](double t) { return 4.0 * std::exp(-t); }};
    const auto rep = check_reference_cost_domination(c, v1(0.0), linspace(0, 5, 11));
    EXPECT_TRUE(rep.ok);
    EXPECT_NEAR(rep.integral_of_tail, 4.0 * std::exp(-5.0), 1e-10);
    for (std::size_t k = 1; k < rep.tail_table.size(); ++k)
        EXPECT_LT(rep.tail_table[k].second, rep.tail_table[k - 1].second);
}

TEST(Domination, UndiscountedBoundIsNotIntegrable) {
    RunningCost c;
    c.ell2 = [](double, const Vec& x, const Vec&) { return std::abs(x(0)); };
    c.dominator = Dominator{Box{v1(-1), v1(1)}, [](double) { return 1.0; }};
    const auto rep = check_reference_cost_domination(c, v1(0.0), linspace(0, 5, 6));
    EXPECT_TRUE(rep.dominated_on_grid);
    EXPECT_FALSE(rep.tail_integrable);
    EXPECT_FALSE(rep.ok);
}

TEST(Convexity, LinearAndQuadraticCostsPass) {
    const auto U = ControlValueSet::interval(0, 2);
    EXPECT_TRUE(check_convexity_in_u(builtin::linear_cost_growth().cost, U, {0, 1}, {v1(1)}, 200, 3).ok);
    RunningCost c;
    c.ell2 = [](double, const Vec&, const Vec& u) { return std::sin(3 * u(0)); };
    EXPECT_FALSE(check_convexity_in_u(c, U, {0}, {v1(0)}, 200, 3).ok);
}
