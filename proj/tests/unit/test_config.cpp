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
#include "patternlab/config.hpp"
#include "patternlab/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <string>

using namespace patternlab;

namespace {

Vec v1(double a) { return Vec::Constant(1, a); }

std::string config_path(const std::string& name) { return std::string(PATTERNLAB_CONFIG_DIR) + "/" + name; }

const char* kMinimal = R"(# comment
[problem]
state_dim = 1
control_dim = 1
a1 = x1
b1_1 = -x1
ell1 = abs(x1)
ell2 = 4 * abs(u1)
x0 = 1

[control_set]
kind = box
lower = 0
upper = 2
)";

}  // namespace

TEST(ConfigDocument, SectionsKeysAndPositions) {
    const auto doc = ConfigDocument::parse(kMinimal);
    EXPECT_TRUE(doc.has_section("problem"));
    EXPECT_TRUE(doc.has("problem", "a1"));
    EXPECT_FALSE(doc.has("problem", "a2"));
    const auto& e = doc.get("problem", "ell2");
    EXPECT_EQ(e.value, "4 * abs(u1)");
    EXPECT_EQ(e.line, 8);
    EXPECT_EQ(e.value_column, 8);
    EXPECT_THROW(doc.get("problem", "nope"), ParseError);
}

TEST(ConfigDocument, RejectsMalformedText) {
    EXPECT_THROW(ConfigDocument::parse("a = 1\n"), ParseError);
    EXPECT_THROW(ConfigDocument::parse("[p]\na = 1\na = 2\n"), ParseError);
    EXPECT_THROW(ConfigDocument::parse("[p]\n[p]\n"), ParseError);
    EXPECT_THROW(ConfigDocument::parse("[p\n"), ParseError);
    try {
        ConfigDocument::parse("[p]\nok = 1\n  missing equals\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line, 3);
        EXPECT_EQ(e.column, 3);
    }
}

TEST(ProblemConfig, MinimalConfigMatchesBuiltin) {
    const auto cfg = read_problem_config(ConfigDocument::parse(kMinimal));
    const auto p = cfg.to_problem();
    const auto ref = builtin::linear_cost_growth();
    for (double t : {0.0, 1.3}) {
        for (double x : {-2.0, 0.5, 3.0}) {
            for (double u : {0.0, 1.0, 2.0}) {
                EXPECT_DOUBLE_EQ(p.system.rhs(t, v1(x), v1(u))(0), ref.system.rhs(t, v1(x), v1(u))(0));
                EXPECT_DOUBLE_EQ(p.cost(t, v1(x), v1(u)), ref.cost(t, v1(x), v1(u)));
            }
        }
    }
    EXPECT_EQ(p.control_set.upper()(0), 2.0);
    EXPECT_EQ(p.x0(0), 1.0);
}

TEST(ProblemConfig, ExpressionErrorsPointIntoTheDocument) {
    std::string text = kMinimal;
    text.replace(text.find("ell2 = 4 * abs(u1)"), 18, "ell2 = 4 * abs(u1) +");
    try {
        read_problem_config(ConfigDocument::parse(text));
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line, 8);
        EXPECT_GE(e.column, 8);
    }
    std::string bad_var = kMinimal;
    bad_var.replace(bad_var.find("a1 = x1"), 7, "a1 = x2");
    EXPECT_THROW(read_problem_config(ConfigDocument::parse(bad_var)), ParseError);
    std::string bad_kind = kMinimal;
    bad_kind.replace(bad_kind.find("kind = box"), 10, "kind = ball");
    EXPECT_THROW(read_problem_config(ConfigDocument::parse(bad_kind)), ParseError);
}

TEST(ProblemConfig, ShippedConfigsLoad) {
    for (const char* name : {"ex24.ini", "ex41.ini", "ex42.ini", "counterexample.ini", "lqr.ini"}) {
        const auto cfg = read_problem_config(ConfigDocument::load(config_path(name)));
        EXPECT_NO_THROW(cfg.to_problem().validate()) << name;
        EXPECT_FALSE(cfg.horizons.empty()) << name;
    }
}

TEST(ProblemConfig, DiscountedConfigCarriesTemplateAndHorizons) {
    const auto cfg = read_problem_config(ConfigDocument::load(config_path("ex42.ini")));
    ASSERT_TRUE(cfg.pattern.has_value());
    ASSERT_EQ(cfg.pattern->size(), 3);
    EXPECT_EQ(cfg.pattern->pieces[1].value(0), 1.0);
    EXPECT_EQ(cfg.horizons, (std::vector<double>{4, 6, 10, 15, 20}));
    const auto p = cfg.to_problem();
    const auto ref = builtin::discounted_singular();
    EXPECT_DOUBLE_EQ(p.cost(0.7, v1(0.4), v1(2.0)), ref.cost(0.7, v1(0.4), v1(2.0)));
}

TEST(ProblemConfig, StorageExpressionBecomesCandidate) {
    const auto cfg = read_problem_config(ConfigDocument::load(config_path("counterexample.ini")));
    const auto s = cfg.storage_candidate();
    ASSERT_TRUE(s.has_value());
    EXPECT_DOUBLE_EQ((*s)(v1(-std::sqrt(3.0))), builtin::bump_storage()(v1(-std::sqrt(3.0))));
    const auto p = cfg.to_problem();
    EXPECT_EQ(p.system.rhs(1.0, v1(2), v1(1))(0), 0.0);
    EXPECT_EQ(p.system.rhs(0.5, v1(2), v1(1))(0), 4.0);
}

TEST(NumberLists, ParsesAndLocatesErrors) {
    EXPECT_EQ(parse_number_list("1, 2.5,inf"), (std::vector<double>{1, 2.5, kInf}));
    EXPECT_EQ(parse_number("-3e-2"), -0.03);
    EXPECT_THROW(parse_number("abc", 2, 5), ParseError);
    const auto vs = parse_vector_list("0;1, 1;1");
    ASSERT_EQ(vs.size(), 2u);
    EXPECT_EQ(vs[0](1), 1.0);
    EXPECT_EQ(vs[1](0), 1.0);
}
