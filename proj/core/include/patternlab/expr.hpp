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

#pragma once

#include "patternlab/types.hpp"

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace patternlab {

struct Bindings {
    double t = 0.0;
    const Vec* x = nullptr;
    const Vec* u = nullptr;
};

/// Immutable arithmetic expression over t, x1..xn, u1..um.
///
/// Grammar: numbers, variables, + - * / ^ (right-associative), unary minus, parentheses
/// and the functions exp ln abs sqrt tanh (one argument), min max (two) and
/// indicator(t, a, b), which is 1 on [a, b) and 0 elsewhere.
class Expression {
public:
    enum class Kind { Number, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };
    enum class Var { T, X, U };

    /// The constant 0.
    Expression();

    /// `line` and `column` locate the first character of `source` in its document.
    static Expression parse(const std::string& source, int line = 1, int column = 1);

    double evaluate(const Bindings& b) const;
    double operator()(double t, const Vec& x, const Vec& u) const;

    /// Minimal-parenthesis text that parses back to the same tree.
    std::string print() const;

    /// Structural equality, ignoring source positions.
    bool operator==(const Expression& other) const;

    /// Names like "t", "x2", "u1".
    std::set<std::string> variables() const;
    /// Throws ParseError at the first variable outside t, x1..xn, u1..um (or outside `allow_state`).
    void check_variables(int n, int m, bool allow_state = true, bool allow_control = true,
                         bool allow_time = true) const;

    const std::string& source() const;

    struct Node {
        Kind kind = Kind::Number;
        double number = 0.0;
        Var var = Var::T;
        int index = 0;          ///< 0-based component of x or u
        std::string function;  ///< for calls
        std::vector<int> children;
        int line = 1;
        int column = 1;
    };

private:
    struct Data {
        std::vector<Node> nodes;
        int root = 0;
        std::string source;
    };
    explicit Expression(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
    double eval(int id, const Bindings& b) const;
    std::string print(int id) const;
    bool equal(int a, const Expression& other, int b) const;

    std::shared_ptr<const Data> data_;
    friend class ExpressionParser;
};

}  // namespace patternlab
