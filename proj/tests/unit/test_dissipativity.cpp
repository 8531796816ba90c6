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
#include "patternlab/dissipativity.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace patternlab;

namespace {

Vec v1(double a) { return Vec::Constant(1, a); }

StorageCertificate certificate(const StorageCandidate& s, const ProblemInstance& p, double lo, double hi) {
    StorageCertificate c;
    c.storage = s;
    const RunningCost cost = p.cost;
    c.supply = [cost](double t, const Vec& x, const Vec& u) { return cost(t, x, u); };
    c.domain = Box{v1(lo), v1(hi)};
    return c;
}

ControlAffineSystem frozen() {
    ControlAffineSystem s;
    s.drift = [](double, const Vec&) { return v1(0.0); };
    s.input_matrix = [](double, const Vec&) { return Mat::Zero(1, 1); };
    return s;
}

}  // namespace

TEST(Differential, LogStorageCertifiesLinearCostGrowth) {
    const auto p = builtin::linear_cost_growth();
    const auto cert = certificate(builtin::log_storage(), p, -100, 100);
    const auto rep = check_differential(cert, p.system, p.control_set, 10.0);
    EXPECT_TRUE(rep.ok);
    EXPECT_GE(rep.worst_margin, -1e-9);
    EXPECT_TRUE(rep.nonnegative);
    EXPECT_TRUE(rep.gradient_consistent);
}

TEST(Differential, BumpStorageOnEscapeProblemHasKnownRatio) {
    const auto p = builtin::finite_escape();
    const auto cert = certificate(builtin::bump_storage(), p, -50, 50);
    const auto rep = check_differential(cert, p.system, p.control_set, 2.0);
    EXPECT_TRUE(rep.ok);
    EXPECT_NEAR(rep.worst_ratio, 3.0 * std::sqrt(3.0) / 8.0, 1e-6);
    EXPECT_NEAR(rep.ratio_witness.x(0), -std::sqrt(3.0), 1e-4);
    EXPECT_LE(rep.ratio_witness.t, 1.0);
}

TEST(Differential, SquareStorageFailsOnDiscountedSystem) {
    const auto p = builtin::discounted_singular();
    const auto cert = certificate({"x^2", [](const Vec& x) { return x.squaredNorm(); }, {}}, p, -2, 2);
    const auto rep = check_differential(cert, p.system, p.control_set, {0.0}, {v1(1.0)}, {v1(0.0)});
    EXPECT_FALSE(rep.ok);
    EXPECT_NEAR(rep.worst_margin, 1.0 - 2.0, 1e-6);
    EXPECT_EQ(rep.witness.x(0), 1.0);
}

TEST(Differential, NegativeStorageIsReported) {
    const auto p = builtin::linear_cost_growth();
    const auto cert = certificate({"-x^2", [](const Vec& x) { return -x.squaredNorm(); }, {}}, p, -1, 1);
    const auto rep = check_differential(cert, p.system, p.control_set, 1.0);
    EXPECT_FALSE(rep.nonnegative);
    ASSERT_TRUE(rep.negative_witness.has_value());
}

TEST(Differential, WrongAnalyticGradientIsFlagged) {
    const auto p = builtin::linear_cost_growth();
    StorageCandidate s{"x^2", [](const Vec& x) { return x.squaredNorm(); }, [](const Vec& x) { return Vec(x); }};
    const auto rep = check_differential(certificate(s, p, -3, 3), p.system, p.control_set, 1.0);
    EXPECT_FALSE(rep.gradient_consistent);
}

TEST(Integral, DecayingControlHoldsWithMargin) {
    const auto p = builtin::linear_cost_growth();
    const auto cert = certificate(builtin::log_storage(), p, -100, 100);
    const auto rep =
        check_integral(cert, p.system, {v1(1.0)}, {ControlSignal::constant(2.0, 5.0)}, 5.0, 1e-9);
    EXPECT_TRUE(rep.ok);
    const double t = 5.0;
    const double closed = std::log(std::exp(-t) + 1) - std::log(2.0) - (8 * t + 1 - std::exp(-t));
    EXPECT_LT(rep.worst_violation, 0.0);
    EXPECT_LT(closed, rep.worst_violation);
}

TEST(Integral, FrozenSystemIsAnEquality) {
    StorageCertificate c;
    c.storage = builtin::log_storage();
    c.supply = [](double, const Vec&, const Vec&) { return 0.0; };
    c.domain = Box{v1(-1), v1(1)};
    const auto rep = check_integral(c, frozen(), {v1(0.4), v1(-3)}, {ControlSignal::constant(1.0, 2.0)}, 2.0, 1e-12);
    EXPECT_TRUE(rep.ok);
    EXPECT_NEAR(rep.worst_violation, 0.0, 1e-12);
}

TEST(Integral, CoerciveCandidateFailsOnDiscountedSystem) {
    const auto p = builtin::discounted_singular();
    const auto cert = certificate(builtin::log_storage(), p, -100, 100);
    const auto rep = check_integral(cert, p.system, {v1(1.0)}, {ControlSignal::constant(0.0, 5.0)}, 5.0, 1e-9);
    EXPECT_FALSE(rep.ok);
    auto gap = [](double t) { return std::log((std::exp(t) + 1) / 2) - (1 - std::exp(-t)) - 1e-9; };
    double lo = 0.5, hi = 2.0;
    for (int i = 0; i < 100; ++i) (gap(0.5 * (lo + hi)) > 0 ? hi : lo) = 0.5 * (lo + hi);
    EXPECT_NEAR(rep.first_violation_time, hi, 1e-6);
    EXPECT_LE(rep.first_violation_time, 2.0);
}

TEST(Coercivity, Verdicts) {
    const std::vector<double> radii{1, 10, 100, 1e3, 1e4, 1e5, 1e6};
    const auto log_rep = check_coercivity(builtin::log_storage(), 1, radii);
    EXPECT_EQ(log_rep.verdict, CoercivityVerdict::CoerciveEvidence);
    EXPECT_NEAR(log_rep.growth_table.back().second, std::log(1e6 + 1), 1e-12);
    EXPECT_EQ(check_coercivity(builtin::bump_storage(), 1, radii).verdict, CoercivityVerdict::NonCoerciveEvidence);
    StorageCandidate sq{"|x|^2", [](const Vec& x) { return x.squaredNorm(); }, {}};
    const auto sq_rep = check_coercivity(sq, 2, radii);
    EXPECT_EQ(sq_rep.verdict, CoercivityVerdict::CoerciveEvidence);
    EXPECT_NEAR(sq_rep.growth_table[2].second, 1e4, 1e-6);
    EXPECT_THROW(check_coercivity(sq, 1, {2, 1}), std::invalid_argument);
}

TEST(Boundedness, FrozenSystemIsTight) {
    StorageCandidate s = builtin::half_square_storage();
    const auto rep = uniform_boundedness_probe(s, frozen(), v1(2.0), {ControlSignal::constant(1.0, 3.0)}, 3.0,
                                               BoundConstants{0.0, 0.0, 1.0, kInf});
    EXPECT_TRUE(rep.ok);
    EXPECT_EQ(rep.bound, 2.0);
    EXPECT_EQ(rep.storage_sup, 2.0);
    EXPECT_EQ(rep.state_sup, 2.0);
}

TEST(Boundedness, BangBangSamplesStayInSublevelSet) {
    const auto p = builtin::linear_cost_growth();
    const double T = 6.0;
    const double C = oracle::linear_cost_growth_cost(T, T);
    std::vector<ControlSignal> samples;
    for (double tau : {0.0, 1.0, 2.0, 3.0, 4.5, 6.0}) samples.push_back(ControlSignal::scalar({0, tau, T}, {2, 0}));
    const auto rep = uniform_boundedness_probe(builtin::log_storage(), p.system, p.x0, samples, T,
                                               BoundConstants{C, 0.0, 1.0, kInf});
    EXPECT_TRUE(rep.ok);
    EXPECT_NEAR(rep.bound, std::log(2.0) + C, 1e-12);
}

TEST(Boundedness, EscapeSequenceBreaksEveryCoerciveBound) {
    const auto p = builtin::finite_escape();
    std::vector<ControlSignal> samples;
    for (double Tk : {10.0, 100.0, 1000.0}) samples.push_back(ControlSignal::constant(1.0 - 1.0 / Tk, 1.0));
    for (const auto& s : {builtin::log_storage(), builtin::half_square_storage()}) {
        const auto rep =
            uniform_boundedness_probe(s, p.system, p.x0, samples, 1.0, BoundConstants{1.0, 0.0, 1.0, kInf});
        EXPECT_FALSE(rep.ok) << s.name;
        EXPECT_NEAR(rep.state_sup, 1000.0, 1e-3);
    }
}
