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
#include "patternlab/expr.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace patternlab;

namespace {

Vec v1(double a) { return Vec::Constant(1, a); }

double eval(const std::string& src, double t, double x, double u) { return Expression::parse(src)(t, v1(x), v1(u)); }

}  // namespace

TEST(Parse, BilinearDynamicsTree) {
    const auto e = Expression::parse("(1 - u1) * x1");
    EXPECT_EQ(e, Expression::parse("(1-u1)*x1"));
    EXPECT_FALSE(e == Expression::parse("1 - u1 * x1"));
    EXPECT_EQ(e.print(), "(1 - u1) * x1");
    EXPECT_EQ(e.variables(), (std::set<std::string>{"u1", "x1"}));
}

TEST(Parse, IndicatorDynamics) {
    const auto e = Expression::parse("indicator(t,0,1) * u1 * x1^2");
    EXPECT_EQ(e.variables(), (std::set<std::string>{"t", "u1", "x1"}));
    EXPECT_DOUBLE_EQ(e(0.5, v1(3), v1(0.5)), 4.5);
    EXPECT_EQ(e(1.5, v1(3), v1(0.5)), 0.0);
}

TEST(Parse, LogStorage) {
    const auto e = Expression::parse("ln(abs(x1)+1)");
    EXPECT_EQ(e.variables(), (std::set<std::string>{"x1"}));
    EXPECT_DOUBLE_EQ(e(0.0, v1(-std::exp(2.0) + 1), v1(0)), 2.0);
}

TEST(Parse, PrecedenceAndAssociativity) {
    EXPECT_EQ(eval("-2^2", 0, 0, 0), -4.0);
    EXPECT_EQ(eval("2^3^2", 0, 0, 0), 512.0);
    EXPECT_EQ(eval("8/4/2", 0, 0, 0), 1.0);
    EXPECT_EQ(eval("1 - 2 - 3", 0, 0, 0), -4.0);
    EXPECT_EQ(eval("2 * -3", 0, 0, 0), -6.0);
    EXPECT_EQ(eval("min(3, max(1, 2)) + sqrt(16)", 0, 0, 0), 6.0);
    EXPECT_EQ(eval("1.5e2 + .5", 0, 0, 0), 150.5);
}

TEST(Parse, ErrorsCarryPosition) {
    try {
        Expression::parse("x1 + * 2", 4, 10);
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line, 4);
        EXPECT_EQ(e.column, 15);
    }
    EXPECT_THROW(Expression::parse("foo(x1)"), ParseError);
    EXPECT_THROW(Expression::parse("exp(1, 2)"), ParseError);
    EXPECT_THROW(Expression::parse("(x1 + 1"), ParseError);
    EXPECT_THROW(Expression::parse("x0"), ParseError);
    EXPECT_THROW(Expression::parse(""), ParseError);
    EXPECT_THROW(Expression::parse("x1 x2"), ParseError);
}

TEST(Parse, VariableScopeCheck) {
    const auto e = Expression::parse("x2 + u1 * t");
    EXPECT_NO_THROW(e.check_variables(2, 1));
    EXPECT_THROW(e.check_variables(1, 1), ParseError);
    EXPECT_THROW(e.check_variables(2, 1, true, false), ParseError);
    EXPECT_THROW(e.check_variables(2, 1, true, true, false), ParseError);
}

TEST(Evaluate, Substitution) {
    EXPECT_DOUBLE_EQ(eval("(1-u1)*x1", 0, std::exp(-1.0), 2), -std::exp(-1.0));
    EXPECT_EQ(eval("(abs(u1)/3 + abs(x1)) * exp(-2*t)", 0, 1, 0), 1.0);
    EXPECT_EQ(eval("indicator(t,0,1)", 1, 0, 0), 0.0);
    EXPECT_EQ(eval("indicator(t,0,1)", 0, 0, 0), 1.0);
    EXPECT_DOUBLE_EQ(eval("tanh(x1)", 0, 0.3, 0), std::tanh(0.3));
}

TEST(Evaluate, DomainErrors) {
    EXPECT_THROW(eval("ln(x1)", 0, 0, 0), EvalError);
    EXPECT_THROW(eval("sqrt(x1)", 0, -1, 0), EvalError);
    EXPECT_THROW(eval("1 / x1", 0, 0, 0), EvalError);
    Bindings b;
    EXPECT_THROW(Expression::parse("x1 + 1").evaluate(b), EvalError);
    EXPECT_EQ(Expression().evaluate(b), 0.0);
}

TEST(Evaluate, BitwiseDeterministic) {
    const auto e = Expression::parse("exp(-2*t) * (abs(u1)/3 + abs(x1)) + ln(1 + x1^2) / (1 + t)");
    const double a = e(0.37, v1(1.9), v1(0.4));
    for (int i = 0; i < 5; ++i) EXPECT_EQ(e(0.37, v1(1.9), v1(0.4)), a);
}
