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

#include <cmath>
#include <stdexcept>

namespace patternlab::builtin {

namespace {

Mat scalar_matrix(double v) { return Mat::Constant(1, 1, v); }
Vec scalar_vec(double v) { return Vec::Constant(1, v); }

ControlAffineSystem bilinear_growth() {
    ControlAffineSystem s;
    s.drift = [](double, const Vec& x) { return Vec(x); };
    s.input_matrix = [](double, const Vec& x) { return scalar_matrix(-x(0)); };
    s.drift_jacobian = [](double, const Vec&) { return scalar_matrix(1.0); };
    s.input_jacobian = [](double, const Vec&, const Vec& u) { return scalar_matrix(-u(0)); };
    return s;
}

}  // namespace

ProblemInstance bang_bang_growth() {
    ProblemInstance p;
    p.name = "ex24";
    p.system.drift = [](double, const Vec&) { return scalar_vec(0.0); };
    p.system.input_matrix = [](double, const Vec& x) { return scalar_matrix(x(0)); };
    p.system.drift_jacobian = [](double, const Vec&) { return scalar_matrix(0.0); };
    p.system.input_jacobian = [](double, const Vec&, const Vec& u) { return scalar_matrix(u(0)); };
    p.cost.ell1 = [](double, const Vec& x) { return -x(0); };
    p.cost.ell2 = [](double, const Vec& x, const Vec& u) { return u(0) * x(0); };
    p.cost.sign_definite = false;
    p.cost.state_gradient = [](double, const Vec&, const Vec& u) { return scalar_vec(u(0) - 1.0); };
    p.x0 = scalar_vec(1.0);
    p.control_set = ControlValueSet::interval(0.0, 1.0);
    p.u_star = scalar_vec(0.0);
    p.regularity_asserted = true;
    p.control_coefficient = [](double, const Vec& x) { return scalar_vec(x(0)); };
    return p;
}

ProblemInstance finite_escape() {
    ProblemInstance p;
    p.name = "counterexample";
    auto window = [](double t) { return t >= 0.0 && t <= 1.0 ? 1.0 : 0.0; };
    p.system.drift = [](double, const Vec&) { return scalar_vec(0.0); };
    p.system.input_matrix = [window](double t, const Vec& x) { return scalar_matrix(window(t) * x(0) * x(0)); };
    p.system.drift_jacobian = [](double, const Vec&) { return scalar_matrix(0.0); };
    p.system.input_jacobian = [window](double t, const Vec& x, const Vec& u) {
        return scalar_matrix(2.0 * window(t) * x(0) * u(0));
    };
    p.system.coefficient_breakpoints = {1.0};
    p.cost.ell2 = [](double t, const Vec&, const Vec& u) { return std::exp(-t) * std::abs(u(0)); };
    p.cost.state_gradient = [](double, const Vec&, const Vec&) { return scalar_vec(0.0); };
    p.cost.dominator = Dominator{Box{scalar_vec(-1e3), scalar_vec(1e3)}, [](double) { return 0.0; }};
    p.x0 = scalar_vec(1.0);
    p.control_set = ControlValueSet::interval(0.0, 1.0);
    p.u_star = scalar_vec(0.0);
    p.regularity_asserted = true;
    return p;
}

ProblemInstance linear_cost_growth() {
    ProblemInstance p;
    p.name = "ex41";
    p.system = bilinear_growth();
    p.cost.ell1 = [](double, const Vec& x) { return std::abs(x(0)); };
    p.cost.ell2 = [](double, const Vec&, const Vec& u) { return 4.0 * std::abs(u(0)); };
    p.cost.dominator = Dominator{Box{scalar_vec(-1e3), scalar_vec(1e3)}, [](double) { return 0.0; }};
    p.x0 = scalar_vec(1.0);
    p.control_set = ControlValueSet::interval(0.0, 2.0);
    p.u_star = scalar_vec(0.0);
    p.regularity_asserted = true;
    p.control_coefficient = [](double, const Vec&) { return scalar_vec(4.0); };
    return p;
}

ProblemInstance discounted_singular() {
    ProblemInstance p;
    p.name = "ex42";
    p.system = bilinear_growth();
    p.cost.ell1 = [](double t, const Vec& x) { return std::abs(x(0)) * std::exp(-2.0 * t); };
    p.cost.ell2 = [](double t, const Vec&, const Vec& u) { return std::abs(u(0)) / 3.0 * std::exp(-2.0 * t); };
    p.cost.dominator = Dominator{Box{scalar_vec(-1e3), scalar_vec(1e3)}, [](double) { return 0.0; }};
    p.x0 = scalar_vec(1.0);
    p.control_set = ControlValueSet::interval(0.0, 2.0);
    p.u_star = scalar_vec(0.0);
    p.regularity_asserted = true;
    p.control_coefficient = [](double t, const Vec&) { return scalar_vec(std::exp(-2.0 * t) / 3.0); };
    p.singular_residual = [](double, const Vec& x) { return x(0) - 2.0 / 3.0; };
    return p;
}

ProblemInstance scalar_lqr() {
    ProblemInstance p;
    p.name = "lqr";
    p.system.drift = [](double, const Vec&) { return scalar_vec(0.0); };
    p.system.input_matrix = [](double, const Vec&) { return scalar_matrix(1.0); };
    p.system.drift_jacobian = [](double, const Vec&) { return scalar_matrix(0.0); };
    p.system.input_jacobian = [](double, const Vec&, const Vec&) { return scalar_matrix(0.0); };
    p.cost.ell1 = [](double, const Vec& x) { return x.squaredNorm(); };
    p.cost.ell2 = [](double, const Vec&, const Vec& u) { return u.squaredNorm(); };
    p.cost.state_gradient = [](double, const Vec& x, const Vec&) { return Vec(2.0 * x); };
    p.cost.growth = GrowthBound{1.0, [](double) { return 0.0; }, 0.0};
    p.cost.dominator = Dominator{Box{scalar_vec(-1e3), scalar_vec(1e3)}, [](double) { return 0.0; }};
    p.x0 = scalar_vec(1.0);
    p.control_set = ControlValueSet::full_space(1, 2.0);
    p.u_star = scalar_vec(0.0);
    p.regularity_asserted = true;
    return p;
}

StorageCandidate log_storage() {
    return {"ln(|x|+1)", [](const Vec& x) { return std::log(x.norm() + 1.0); },
            [](const Vec& x) -> Vec {
                const double r = x.norm();
                return r == 0.0 ? Vec(Vec::Zero(x.size())) : Vec(x / (r * (r + 1.0)));
            }};
}

StorageCandidate bump_storage() {
    return {"exp(-1)/(1+|x|^2)", [](const Vec& x) { return std::exp(-1.0) / (1.0 + x.squaredNorm()); },
            [](const Vec& x) -> Vec {
                const double d = 1.0 + x.squaredNorm();
                return -2.0 * std::exp(-1.0) * x / (d * d);
            }};
}

StorageCandidate half_square_storage() {
    return {"|x|^2/2", [](const Vec& x) { return 0.5 * x.squaredNorm(); }, [](const Vec& x) { return Vec(x); }};
}

std::vector<std::string> names() { return {"ex24", "counterexample", "ex41", "ex42", "lqr"}; }

ProblemInstance by_name(const std::string& name) {
    if (name == "ex24") return bang_bang_growth();
    if (name == "counterexample") return finite_escape();
    if (name == "ex41") return linear_cost_growth();
    if (name == "ex42") return discounted_singular();
    if (name == "lqr") return scalar_lqr();
    throw std::invalid_argument("unknown built-in problem: " + name);
}

Defaults defaults(const std::string& name) {
    Defaults d;
    if (name == "ex24") {
        d.pattern = PatternTemplate::from_values({1, 0});
        d.horizons = {3, 5, 10, 20};
    } else if (name == "counterexample") {
        d.storage = bump_storage();
        d.pattern = PatternTemplate::from_values({1, 0});
        d.horizons = {2, 5, 10};
    } else if (name == "ex41") {
        d.storage = log_storage();
        d.pattern = PatternTemplate::from_values({2, 0});
        d.horizons = {6, 8, 10, 15, 20, 30};
    } else if (name == "ex42") {
        d.pattern = PatternTemplate::from_values({2, 1, 0});
        d.horizons = {4, 6, 10, 15, 20};
    } else if (name == "lqr") {
        d.storage = half_square_storage();
        d.horizons = {2, 5, 10, 20};
    } else {
        throw std::invalid_argument("unknown built-in problem: " + name);
    }
    return d;
}

QRProblem scalar_lqr_regulator() {
    QRProblem qr = QRProblem::linear_instance(scalar_matrix(0.0), scalar_matrix(1.0), scalar_matrix(1.0),
                                              scalar_matrix(1.0), scalar_vec(1.0));
    qr.name = "lqr";
    return qr;
}

QRProblem cubic_regulator() {
    QRProblem qr;
    qr.name = "cubic";
    qr.system.drift = [](double, const Vec& x) { return scalar_vec(-x(0) * x(0) * x(0)); };
    qr.system.input_matrix = [](double, const Vec&) { return scalar_matrix(1.0); };
    qr.system.drift_jacobian = [](double, const Vec& x) { return scalar_matrix(-3.0 * x(0) * x(0)); };
    qr.system.input_jacobian = [](double, const Vec&, const Vec&) { return scalar_matrix(0.0); };
    qr.R = scalar_matrix(1.0);
    qr.ell1 = [](double, const Vec& x) { return x.squaredNorm(); };
    qr.x0 = scalar_vec(1.0);
    // |x|^3 + 1 <= K (1 + |x|) fails for large |x|; the constant holds on the unit box only.
    qr.growth_constant = 2.0;
    return qr;
}

}  // namespace patternlab::builtin
