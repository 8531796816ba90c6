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

// Closed forms and deliberately simple numerics used as independent references.

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

/// Cost of u = 2 on [0, tau), 0 on [tau, T) for x' = (1 - u) x, l = 4|u| + |x|, x0 = 1.
inline double linear_cost_growth_cost(double tau, double T) {
    return 1.0 - 2.0 * std::exp(-tau) + 8.0 * tau + std::exp(T - 2.0 * tau);
}

/// Minimizer of linear_cost_growth_cost over tau in [0, T].
inline double linear_cost_growth_switch(double T) {
    auto g = [T](double tau) { return std::exp(T - 2.0 * tau) - std::exp(-tau) - 4.0; };
    if (g(0.0) <= 0.0) return 0.0;
    double lo = 0.0, hi = T;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// x' = (1 - u) x, l = (|u|/3 + |x|) e^{-2t}, x0 = 1.
inline double discounted_cost_u0(double T) { return 1.0 - std::exp(-T); }
inline double discounted_cost_u2(double T) { return (2.0 - std::exp(-2.0 * T) - std::exp(-3.0 * T)) / 3.0; }

/// Cost of the singular template (2, 1, 0) with breakpoints t1, t2.
inline double discounted_singular_cost(double t1, double t2, double T) {
    const double x1 = std::exp(-t1);
    double j = (2.0 / 3.0) * (1.0 - std::exp(-2.0 * t1)) / 2.0 + (1.0 - std::exp(-3.0 * t1)) / 3.0;
    j += (1.0 / 3.0 + x1) * (std::exp(-2.0 * t1) - std::exp(-2.0 * t2)) / 2.0;
    j += x1 * std::exp(-t2) * (std::exp(-t2) - std::exp(-T));
    return j;
}

/// x' = u x, l = (u - 1) x on [0, 1]: cost of u = 1 on [0, tau), 0 after.
inline double bang_bang_growth_cost(double tau, double T) { return -std::exp(tau) * (T - tau); }

/// Scalar x' = u, l = x^2 + u^2, x0 = 1: optimal cost on [0, T].
inline double scalar_lqr_cost(double T) { return std::tanh(T); }

/// Classic RK4 with a fixed step.
inline std::vector<double> rk4(const std::function<std::vector<double>(double, const std::vector<double>&)>& f,
                               double t0, double t1, std::vector<double> y, int steps) {
    const double h = (t1 - t0) / steps;
    auto axpy = [](const std::vector<double>& a, double s, const std::vector<double>& b) {
        std::vector<double> r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + s * b[i];
        return r;
    };
    double t = t0;
    for (int k = 0; k < steps; ++k) {
        const auto k1 = f(t, y);
        const auto k2 = f(t + h / 2, axpy(y, h / 2, k1));
        const auto k3 = f(t + h / 2, axpy(y, h / 2, k2));
        const auto k4 = f(t + h, axpy(y, h, k3));
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        t = t0 + (k + 1) * h;
    }
    return y;
}

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

}  // namespace oracle
