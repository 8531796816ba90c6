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

#include "patternlab/errors.hpp"
#include "patternlab/signals.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace patternlab;

namespace {

Vec v1(double a) { return Vec::Constant(1, a); }

}  // namespace

TEST(ControlSignal, EvaluatesHalfOpenPiecesAndTail) {
    const auto u = ControlSignal::scalar({0, 6, 10}, {2, 0}, 0.0);
    EXPECT_EQ(u.evaluate_scalar(3), 2.0);
    EXPECT_EQ(u.evaluate_scalar(6), 0.0);
    EXPECT_EQ(u.evaluate_scalar(12), 0.0);
    EXPECT_EQ(u.evaluate_scalar(0), 2.0);
}

TEST(ControlSignal, ConstantSignalHoldsBeforeHorizon) {
    const auto u = ControlSignal::constant(1.7, 4.0, 0.0);
    for (double t : {0.0, 1.0, 3.999}) EXPECT_EQ(u.evaluate_scalar(t), 1.7);
    EXPECT_EQ(u.evaluate_scalar(4.0), 0.0);
}

TEST(ControlSignal, InfiniteHorizonNeverReachesTail) {
    const auto u = ControlSignal::scalar({0, std::log(1.5), kInf}, {2, 1}, 0.0);
    EXPECT_EQ(u.evaluate_scalar(1.0), 1.0);
    EXPECT_EQ(u.evaluate_scalar(0.1), 2.0);
    EXPECT_EQ(u.evaluate_scalar(1e9), 1.0);
}

TEST(ControlSignal, EmptyPiecesAreSkipped) {
    const auto u = ControlSignal::scalar({0, 0, 3, 3, 5}, {7, 1, 9, 2}, 0.0);
    EXPECT_EQ(u.evaluate_scalar(0), 1.0);
    EXPECT_EQ(u.evaluate_scalar(3), 2.0);
    const auto sw = u.switch_times();
    ASSERT_EQ(sw.size(), 2u);
    EXPECT_EQ(sw[0], 3.0);
    EXPECT_EQ(sw[1], 5.0);
}

TEST(ControlSignal, RejectsMalformedBreakpoints) {
    EXPECT_THROW(ControlSignal::scalar({0, 3, 2}, {1, 2}), std::invalid_argument);
    EXPECT_THROW(ControlSignal::scalar({1, 3}, {1}), std::invalid_argument);
    EXPECT_THROW(ControlSignal::scalar({0, 3}, {1, 2}), std::invalid_argument);
    EXPECT_THROW(ControlSignal::constant(1.0, 2.0).evaluate(-1.0), std::invalid_argument);
}

TEST(ControlSignal, AdmissibilityChecksPiecesAndTail) {
    const auto box = ControlValueSet::interval(0, 2);
    EXPECT_TRUE(ControlSignal::scalar({0, 6, 10}, {2, 0}).admissible(box));
    EXPECT_FALSE(ControlSignal::scalar({0, 6, 10}, {3, 0}).admissible(box));
    EXPECT_FALSE(ControlSignal::constant(1.0, 5.0, 5.0).admissible(box));
    const auto full = ControlValueSet::full_space(1, 2.0);
    EXPECT_TRUE(ControlSignal::constant(-4.0, 5.0, 0.0).admissible(full));
    EXPECT_FALSE(ControlSignal::constant(-4.0, 5.0, 1.0).admissible(full));
}

TEST(ControlSignal, TruncationKeepsPrefix) {
    const auto u = ControlSignal::scalar({0, 2, 6, 10}, {2, 1, 0});
    const auto w = u.truncated(4.0, v1(5.0));
    EXPECT_EQ(w.horizon(), 4.0);
    EXPECT_EQ(w.evaluate_scalar(1.0), 2.0);
    EXPECT_EQ(w.evaluate_scalar(3.0), 1.0);
    EXPECT_EQ(w.evaluate_scalar(4.5), 5.0);
}

TEST(ControlSignal, RecordRoundTrip) {
    const auto u = ControlSignal::scalar({0, std::log(1.5), 10 - std::log(2.0), 10}, {2, 1, 0}, 0.0);
    const auto text = to_record(u);
    EXPECT_EQ(signal_from_record(text), u);
    const auto w = ControlSignal::scalar({0, 1, kInf}, {2, 1});
    EXPECT_EQ(signal_from_record(to_record(w)), w);
    EXPECT_THROW(signal_from_record("T=3"), std::invalid_argument);
}

TEST(ControlValueSet, ProjectClampsToBox) {
    const auto U = ControlValueSet::interval(0, 2);
    EXPECT_EQ(project_onto_U(v1(3), U)(0), 2.0);
    EXPECT_EQ(project_onto_U(v1(-1), U)(0), 0.0);
    EXPECT_EQ(project_onto_U(v1(1.5), U)(0), 1.5);
}

TEST(ControlValueSet, FullSpaceProjectionIsIdentity) {
    const auto U = ControlValueSet::full_space(2, 2.0);
    Vec v(2);
    v << -7.5, 1e6;
    EXPECT_EQ(project_onto_U(v, U), v);
    EXPECT_THROW(U.vertices(), InapplicableError);
    EXPECT_THROW(ControlValueSet::full_space(1, 1.0), std::invalid_argument);
}

TEST(ControlValueSet, BoxVerticesAndDimensionChecks) {
    Vec lo(2), hi(2);
    lo << 0, -1;
    hi << 2, 1;
    const auto U = ControlValueSet::box(lo, hi);
    EXPECT_EQ(U.vertices().size(), 4u);
    EXPECT_THROW(project_onto_U(v1(0.0), U), DimensionError);
    EXPECT_THROW(ControlValueSet::box(hi, lo), std::invalid_argument);
}
