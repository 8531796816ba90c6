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
#include "patternlab/dynamics.hpp"
#include "patternlab/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace patternlab;

namespace {

Vec v1(double a) { return Vec::Constant(1, a); }
Mat m1(double a) { return Mat::Constant(1, 1, a); }

ControlAffineSystem scalar_system(std::function<double(double)> a, double b = 0.0) {
    ControlAffineSystem s;
    s.drift = [a](double, const Vec& x) { return v1(a(x(0))); };
    s.input_matrix = [b](double, const Vec&) { return m1(b); };
    return s;
}

}  // namespace

TEST(Integrate, FiniteEscapeSequenceReachesItsHorizonValue) {
    const auto sys = builtin::finite_escape().system;
    for (double Tk : {10.0, 100.0}) {
        const auto u = ControlSignal::constant(1.0 - 1.0 / Tk, 1.0, 0.0);
        const auto traj = integrate(sys, u, v1(1.0), 1.0);
        ASSERT_FALSE(traj.blew_up());
        EXPECT_NEAR(traj.final_state()(0) / Tk, 1.0, 1e-6);
        EXPECT_NEAR(traj.at(0.5)(0), 1.0 / (1.0 - (1.0 - 1.0 / Tk) * 0.5), 1e-7);
    }
}

TEST(Integrate, FrozenDynamicsKeepInitialState) {
    ControlAffineSystem s = scalar_system([](double) { return 0.0; });
    const auto traj = integrate(s, ControlSignal::scalar({0, 1, 3}, {5, -2}), v1(0.3), 3.0);
    for (double t : {0.0, 0.7, 1.0, 2.9, 3.0}) EXPECT_EQ(traj.at(t)(0), 0.3);
}

TEST(Integrate, DecayUnderMaximalControl) {
    const auto sys = builtin::linear_cost_growth().system;
    const auto traj = integrate(sys, ControlSignal::constant(2.0, 1.0, 0.0), v1(1.0), 1.0);
    EXPECT_NEAR(traj.at(1.0)(0), std::exp(-1.0), 1e-8);
}

TEST(Integrate, MatchesFixedStepOracleAcrossSwitch) {
    const auto sys = builtin::linear_cost_growth().system;
    const auto u = ControlSignal::scalar({0, 1.3, 4}, {2, 0});
    const auto traj = integrate(sys, u, v1(1.0), 4.0);
    auto f = [](double, const std::vector<double>& y) { return std::vector<double>{-y[0]}; };
    auto g = [](double, const std::vector<double>& y) { return std::vector<double>{y[0]}; };
    const auto y1 = oracle::rk4(f, 0.0, 1.3, {1.0}, 4000);
    const auto y2 = oracle::rk4(g, 1.3, 4.0, y1, 8000);
    EXPECT_NEAR(traj.at(1.3)(0), y1[0], 1e-10);
    EXPECT_NEAR(traj.at(4.0)(0), y2[0], 1e-9);
}

TEST(Integrate, DetectsBlowUpBeforeWindowCloses) {
    const auto sys = builtin::finite_escape().system;
    IntegrationOptions opts;
    opts.escape_radius = 1e6;
    const auto traj = integrate(sys, ControlSignal::constant(1.0, 1.0, 0.0), v1(1.0), 2.0, opts);
    ASSERT_TRUE(traj.blew_up());
    EXPECT_LE(traj.blow_up_time(), 1.0);
    EXPECT_GE(traj.blow_up_time(), 1.0 - 1e-4);
}

TEST(Integrate, RejectsMismatchedDimensions) {
    const auto sys = builtin::linear_cost_growth().system;
    Vec x0(2);
    x0 << 1, 2;
    EXPECT_THROW(integrate(sys, ControlSignal::constant(1.0, 1.0), x0, 1.0), DimensionError);
}

TEST(ExtendTail, ExponentialDecayAfterHorizon) {
    ControlAffineSystem s = scalar_system([](double) { return 0.0; });
    const auto traj = extend_tail(integrate(s, ControlSignal::constant(0.0, 2.0), v1(5.0), 2.0), 2.0, 10.0);
    EXPECT_NEAR(traj.at(3.0)(0), 5.0 * std::exp(-1.0), 1e-12);
    EXPECT_EQ(traj.tail_start(), 2.0);
}

TEST(ExtendTail, ZeroStateStaysZero) {
    ControlAffineSystem s = scalar_system([](double) { return 0.0; });
    const auto traj = extend_tail(integrate(s, ControlSignal::constant(0.0, 1.0), v1(0.0), 1.0), 1.0, 5.0);
    for (double t : {1.5, 3.0, 5.0}) EXPECT_EQ(traj.at(t)(0), 0.0);
}

TEST(ExtendTail, EscapeSequenceReturnsToOne) {
    const auto sys = builtin::finite_escape().system;
    const double Tk = 10.0;
    const auto u = ControlSignal::constant(1.0 - 1.0 / Tk, 1.0, 0.0);
    const auto traj = extend_tail(integrate(sys, u, v1(1.0), 1.0), 1.0, 20.0);
    EXPECT_NEAR(traj.at(1.0 + std::log(Tk))(0), 1.0, 1e-6);
}

TEST(ExtendTail, CsvHasHeaderAndEndpoint) {
    ControlAffineSystem s = scalar_system([](double x) { return -x; });
    const auto traj = integrate(s, ControlSignal::constant(0.0, 1.0), v1(1.0), 1.0);
    std::ostringstream os;
    traj.write_csv(os, 0.25);
    const std::string text = os.str();
    EXPECT_EQ(text.rfind("t,x1\n", 0), 0u);
    EXPECT_NE(text.find("\n1,"), std::string::npos);
}

TEST(Lipschitz, LinearMapHasUnitRatio) {
    const auto rep = lipschitz_probe(scalar_system([](double x) { return x; }), Box{v1(-1), v1(1)}, 0, 1, 21, v1(0));
    EXPECT_NEAR(rep.max_ratio, 1.0, 1e-12);
}

TEST(Lipschitz, SquareOnTenBoxApproachesTwenty) {
    const auto rep =
        lipschitz_probe(scalar_system([](double x) { return x * x; }), Box{v1(0), v1(10)}, 0, 1, 101, v1(0));
    EXPECT_NEAR(rep.max_ratio, 20.0, 0.2);
    EXPECT_GE(rep.witness_x1(0) + rep.witness_x2(0), 19.8);
}

TEST(Lipschitz, BilinearRatioBoundedByOne) {
    const auto sys = builtin::linear_cost_growth().system;
    for (double u : {0.0, 0.5, 1.0, 2.0}) {
        const auto rep = lipschitz_probe(sys, Box{v1(-5), v1(5)}, 0, 1, 11, v1(u));
        EXPECT_LE(rep.max_ratio, 1.0 + 1e-12);
    }
    EXPECT_THROW(lipschitz_probe(sys, Box{v1(-5), v1(5)}, 0, 1, 1, v1(0)), std::invalid_argument);
}
