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

#include "patternlab/expr.hpp"

#include "patternlab/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>

namespace patternlab {

namespace {

struct FunctionSpec {
    int arity;
};

const std::map<std::string, FunctionSpec>& functions() {
    static const std::map<std::string, FunctionSpec> table{
        {"exp", {1}}, {"ln", {1}}, {"abs", {1}}, {"sqrt", {1}}, {"tanh", {1}},
        {"min", {2}}, {"max", {2}}, {"indicator", {3}}};
    return table;
}

int precedence(Expression::Kind k) {
    switch (k) {
        case Expression::Kind::Add:
        case Expression::Kind::Sub: return 1;
        case Expression::Kind::Mul:
        case Expression::Kind::Div: return 2;
        case Expression::Kind::Negate: return 3;
        case Expression::Kind::Pow: return 4;
        default: return 5;
    }
}

}  // namespace

class ExpressionParser {
public:
    ExpressionParser(const std::string& src, int line, int column) : src_(src), line0_(line), col0_(column) {}

    Expression run() {
        auto d = std::make_shared<Expression::Data>();
        data_ = d.get();
        d->source = src_;
        skip();
        if (pos_ >= src_.size()) fail("empty expression", pos_);
        d->root = expr(0);
        skip();
        if (pos_ < src_.size()) fail(std::string("unexpected '") + src_[pos_] + "'", pos_);
        return Expression(std::move(d));
    }

private:
    [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
        throw ParseError(msg, line0_, col0_ + static_cast<int>(at));
    }

    void skip() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    int add(Expression::Node n, std::size_t at) {
        n.line = line0_;
        n.column = col0_ + static_cast<int>(at);
        data_->nodes.push_back(std::move(n));
        return static_cast<int>(data_->nodes.size()) - 1;
    }

    static bool binary(char c, Expression::Kind& kind, int& prec, bool& right) {
        right = false;
        switch (c) {
            case '+': kind = Expression::Kind::Add; break;
            case '-': kind = Expression::Kind::Sub; break;
            case '*': kind = Expression::Kind::Mul; break;
            case '/': kind = Expression::Kind::Div; break;
            case '^': kind = Expression::Kind::Pow; right = true; break;
            default: return false;
        }
        prec = precedence(kind);
        return true;
    }

    // Precedence climbing over binary operators with prec >= min_prec.
    int expr(int min_prec) {
        int lhs = prefix();
        while (true) {
            skip();
            if (pos_ >= src_.size()) break;
            Expression::Kind kind;
            int prec;
            bool right;
            if (!binary(src_[pos_], kind, prec, right) || prec < min_prec) break;
            const std::size_t at = pos_++;
            const int rhs = expr(right ? prec : prec + 1);
            Expression::Node n;
            n.kind = kind;
            n.children = {lhs, rhs};
            lhs = add(std::move(n), at);
        }
        return lhs;
    }

    int prefix() {
        skip();
        if (pos_ >= src_.size()) fail("unexpected end of expression", pos_);
        const std::size_t at = pos_;
        const char c = src_[pos_];
        if (c == '-') {
            ++pos_;
            Expression::Node n;
            n.kind = Expression::Kind::Negate;
            n.children = {expr(precedence(Expression::Kind::Pow))};
            return add(std::move(n), at);
        }
        if (c == '(') {
            ++pos_;
            const int inner = expr(0);
            skip();
            if (pos_ >= src_.size() || src_[pos_] != ')') fail("expected ')'", pos_);
            ++pos_;
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail(std::string("unexpected '") + c + "'", pos_);
    }

    int number() {
        const std::size_t at = pos_;
        std::size_t end = pos_;
        while (end < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[end])) || src_[end] == '.')) ++end;
        if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
            std::size_t k = end + 1;
            if (k < src_.size() && (src_[k] == '+' || src_[k] == '-')) ++k;
            if (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) {
                while (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) ++k;
                end = k;
            }
        }
        double v = 0.0;
        const auto res = std::from_chars(src_.data() + at, src_.data() + end, v);
        if (res.ec != std::errc() || res.ptr != src_.data() + end) fail("malformed number", at);
        pos_ = end;
        Expression::Node n;
        n.kind = Expression::Kind::Number;
        n.number = v;
        return add(std::move(n), at);
    }

    int identifier() {
        const std::size_t at = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
        const std::string name = src_.substr(at, pos_ - at);
        skip();
        const bool call = pos_ < src_.size() && src_[pos_] == '(';
        if (call) {
            const auto it = functions().find(name);
            if (it == functions().end()) fail("unknown function '" + name + "'", at);
            ++pos_;
            Expression::Node n;
            n.kind = Expression::Kind::Call;
            n.function = name;
            skip();
            if (pos_ < src_.size() && src_[pos_] == ')') {
                ++pos_;
            } else {
                while (true) {
                    n.children.push_back(expr(0));
                    skip();
                    if (pos_ < src_.size() && src_[pos_] == ',') {
                        ++pos_;
                        continue;
                    }
                    if (pos_ < src_.size() && src_[pos_] == ')') {
                        ++pos_;
                        break;
                    }
                    fail("expected ',' or ')'", pos_);
                }
            }
            if (static_cast<int>(n.children.size()) != it->second.arity)
                fail(name + " takes " + std::to_string(it->second.arity) + " argument(s), got " +
                         std::to_string(n.children.size()),
                     at);
            return add(std::move(n), at);
        }
        Expression::Node n;
        n.kind = Expression::Kind::Variable;
        if (name == "t") {
            n.var = Expression::Var::T;
        } else if ((name[0] == 'x' || name[0] == 'u') && name.size() > 1 &&
                   std::all_of(name.begin() + 1, name.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }) &&
                   name[1] != '0') {
            n.var = name[0] == 'x' ? Expression::Var::X : Expression::Var::U;
            int idx = 0;
            const auto res = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
            if (res.ec != std::errc()) fail("index out of range in '" + name + "'", at);
            n.index = idx - 1;
        } else {
            fail("unknown identifier '" + name + "'", at);
        }
        return add(std::move(n), at);
    }

    const std::string& src_;
    int line0_, col0_;
    std::size_t pos_ = 0;
    Expression::Data* data_ = nullptr;
};

Expression::Expression() : Expression(parse("0")) {}

Expression Expression::parse(const std::string& source, int line, int column) {
    return ExpressionParser(source, line, column).run();
}

const std::string& Expression::source() const { return data_->source; }

double Expression::operator()(double t, const Vec& x, const Vec& u) const { return evaluate({t, &x, &u}); }

double Expression::evaluate(const Bindings& b) const { return eval(data_->root, b); }

double Expression::eval(int id, const Bindings& b) const {
    const Node& n = data_->nodes[id];
    auto err = [&](const std::string& msg) -> double { throw EvalError(msg, n.line, n.column); };
    auto arg = [&](std::size_t i) { return eval(n.children[i], b); };
    switch (n.kind) {
        case Kind::Number: return n.number;
        case Kind::Variable: {
            if (n.var == Var::T) return b.t;
            const Vec* v = n.var == Var::X ? b.x : b.u;
            if (!v || n.index >= v->size())
                return err(std::string("unbound variable ") + (n.var == Var::X ? "x" : "u") + std::to_string(n.index + 1));
            return (*v)(n.index);
        }
        case Kind::Negate: return -arg(0);
        case Kind::Add: return arg(0) + arg(1);
        case Kind::Sub: return arg(0) - arg(1);
        case Kind::Mul: return arg(0) * arg(1);
        case Kind::Div: {
            const double num = arg(0), den = arg(1);
            if (den == 0.0) return err("division by zero");
            return num / den;
        }
        case Kind::Pow: return std::pow(arg(0), arg(1));
        case Kind::Call: {
            const std::string& f = n.function;
            if (f == "exp") return std::exp(arg(0));
            if (f == "ln") {
                const double a = arg(0);
                if (!(a > 0.0)) return err("ln of a nonpositive value");
                return std::log(a);
            }
            if (f == "abs") return std::abs(arg(0));
            if (f == "sqrt") {
                const double a = arg(0);
                if (a < 0.0) return err("sqrt of a negative value");
                return std::sqrt(a);
            }
            if (f == "tanh") return std::tanh(arg(0));
            if (f == "min") return std::min(arg(0), arg(1));
            if (f == "max") return std::max(arg(0), arg(1));
            if (f == "indicator") {
                const double s = arg(0), lo = arg(1), hi = arg(2);
                return (lo <= s && s < hi) ? 1.0 : 0.0;
            }
            return err("unknown function " + f);
        }
    }
    return err("malformed expression");
}

std::string Expression::print() const { return print(data_->root); }

std::string Expression::print(int id) const {
    const Node& n = data_->nodes[id];
    switch (n.kind) {
        case Kind::Number: return format_number(n.number);
        case Kind::Variable:
            if (n.var == Var::T) return "t";
            return (n.var == Var::X ? "x" : "u") + std::to_string(n.index + 1);
        case Kind::Negate: {
            const Node& c = data_->nodes[n.children[0]];
            const std::string inner = print(n.children[0]);
            return precedence(c.kind) < precedence(Kind::Pow) ? "-(" + inner + ")" : "-" + inner;
        }
        case Kind::Call: {
            std::string s = n.function + "(";
            for (std::size_t i = 0; i < n.children.size(); ++i) s += (i ? ", " : "") + print(n.children[i]);
            return s + ")";
        }
        default: break;
    }
    const int p = precedence(n.kind);
    const bool right_assoc = n.kind == Kind::Pow;
    const Node& l = data_->nodes[n.children[0]];
    const Node& r = data_->nodes[n.children[1]];
    std::string ls = print(n.children[0]), rs = print(n.children[1]);
    const int lp = precedence(l.kind), rp = precedence(r.kind);
    if (lp < p || (lp == p && right_assoc)) ls = "(" + ls + ")";
    if (rp < p || (rp == p && !right_assoc)) rs = "(" + rs + ")";
    const char* op = n.kind == Kind::Add ? " + " : n.kind == Kind::Sub ? " - " : n.kind == Kind::Mul ? " * "
                   : n.kind == Kind::Div ? " / " : "^";
    return ls + op + rs;
}

bool Expression::operator==(const Expression& other) const { return equal(data_->root, other, other.data_->root); }

bool Expression::equal(int a, const Expression& other, int b) const {
    const Node& x = data_->nodes[a];
    const Node& y = other.data_->nodes[b];
    if (x.kind != y.kind || x.children.size() != y.children.size()) return false;
    switch (x.kind) {
        case Kind::Number:
            if (!(x.number == y.number)) return false;
            break;
        case Kind::Variable:
            if (x.var != y.var || x.index != y.index) return false;
            break;
        case Kind::Call:
            if (x.function != y.function) return false;
            break;
        default: break;
    }
    for (std::size_t i = 0; i < x.children.size(); ++i) {
        if (!equal(x.children[i], other, y.children[i])) return false;
    }
    return true;
}

std::set<std::string> Expression::variables() const {
    std::set<std::string> out;
    for (const auto& n : data_->nodes) {
        if (n.kind != Kind::Variable) continue;
        out.insert(n.var == Var::T ? std::string("t") : (n.var == Var::X ? "x" : "u") + std::to_string(n.index + 1));
    }
    return out;
}

void Expression::check_variables(int n, int m, bool allow_state, bool allow_control, bool allow_time) const {
    for (const auto& node : data_->nodes) {
        if (node.kind != Kind::Variable) continue;
        const std::string name =
            node.var == Var::T ? std::string("t") : (node.var == Var::X ? "x" : "u") + std::to_string(node.index + 1);
        bool ok = true;
        if (node.var == Var::T) ok = allow_time;
        if (node.var == Var::X) ok = allow_state && node.index < n;
        if (node.var == Var::U) ok = allow_control && node.index < m;
        if (!ok) throw ParseError("variable '" + name + "' is not declared here", node.line, node.column);
    }
}

}  // namespace patternlab
