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

#include "patternlab/costs.hpp"

#include "patternlab/errors.hpp"
#include "patternlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace patternlab {

double RunningCost::operator()(double t, const Vec& x, const Vec& u) const {
    const double a = ell1(t, x);
    if (a == kInf) return kInf;
    const double b = ell2(t, x, u);
    return a + b;
}

Vec RunningCost::gradient_x(double t, const Vec& x, const Vec& u) const {
    if (state_gradient) return (*state_gradient)(t, x, u);
    Vec g(x.size());
    const double base = std::cbrt(std::numeric_limits<double>::epsilon());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double h = base * (1.0 + std::abs(x(j)));
        Vec xp = x, xm = x;
        xp(j) += h;
        xm(j) -= h;
        g(j) = ((*this)(t, xp, u) - (*this)(t, xm, u)) / (2 * h);
    }
    return g;
}

double evaluate_cost(const RunningCost& cost, const Trajectory& traj, const ControlSignal& u, double t0, double t1,
                     double quad_tol) {
    if (t1 < t0) throw std::invalid_argument("cost interval is reversed");
    if (traj.blew_up() && traj.blow_up_time() <= t1) throw BlowUpError("trajectory blew up inside the cost window", traj.blow_up_time());
    if (!traj.covers(t1)) throw IntegrationError("trajectory is shorter than the cost window");
    std::vector<double> splits = cost.breakpoints;
    splits.insert(splits.end(), u.breakpoints().begin(), u.breakpoints().end());
    auto integrand = [&](double t) { return cost(t, traj.at(t), u.value_at(t)); };
    return integrate_adaptive(integrand, t0, t1, quad_tol, splits, 20000, 1e-14).value;
}

StateCostFn box_constraint_indicator(const Box& X) {
    return [X](double, const Vec& x) { return X.contains(x, 1e-9) ? 0.0 : kInf; };
}

GrowthReport check_growth_condition(const RunningCost& cost, double exponent, const std::vector<double>& t_grid,
                                    const std::vector<Vec>& x_grid, const std::vector<Vec>& u_grid) {
    if (!std::isfinite(exponent))
        throw InapplicableError("growth condition needs a finite exponent; compact control sets use compactness instead");
    if (!cost.growth) throw std::invalid_argument("running cost declares no growth bound");
    const auto& g = *cost.growth;
    GrowthReport rep;
    for (double t : t_grid) {
        for (const auto& x : x_grid) {
            for (const auto& u : u_grid) {
                const double margin = cost.ell2(t, x, u) - (g.alpha * std::pow(u.norm(), exponent) - g.gamma(t));
                if (margin < rep.worst_margin) {
                    rep.worst_margin = margin;
                    rep.witness = {t, x, u};
                }
            }
        }
    }
    rep.ok = rep.worst_margin >= -1e-9;
    return rep;
}

namespace {

// Integral of m over [T, inf) by doubling panels; +inf when the panels stop shrinking.
double tail_integral(const std::function<double(double)>& m, double T) {
    double a = std::max(T, 1e-3), sum = 0.0;
    if (T < a) sum += integrate_adaptive(m, T, a, 1e-14).value;
    for (int k = 0; k < 64; ++k) {
        const double panel = integrate_adaptive(m, a, 2 * a, 1e-14).value;
        if (!std::isfinite(panel)) return kInf;
        sum += panel;
        if (std::abs(panel) <= 1e-12 * std::max(1.0, std::abs(sum))) return sum;
        a *= 2;
    }
    return kInf;
}

}  // namespace

DominationReport check_reference_cost_domination(const RunningCost& cost, const Vec& u_ref,
                                                 const std::vector<double>& t_grid, int points_per_axis) {
    if (!cost.dominator) throw std::invalid_argument("running cost declares no dominating function");
    if (t_grid.empty()) throw std::invalid_argument("time grid is empty");
    const auto& d = *cost.dominator;
    DominationReport rep;
    const auto xs = box_grid(d.K, points_per_axis);
    for (double t : t_grid) {
        const double m = d.m(t);
        for (const auto& x : xs) {
            const double gap = m - cost.ell2(t, x, u_ref);
            if (gap < rep.worst_gap) {
                rep.worst_gap = gap;
                rep.witness = {t, x, u_ref};
            }
        }
    }
    rep.dominated_on_grid = rep.worst_gap >= -1e-12;

    const double T0 = std::max(1.0, t_grid.back());
    double prev = kInf;
    rep.tail_integrable = true;
    for (int k = 0; k < 6; ++k) {
        const double T = T0 * std::pow(2.0, k);
        const double tail = tail_integral(d.m, T);
        rep.tail_table.emplace_back(T, tail);
        if (!std::isfinite(tail) || tail > prev + 1e-12) rep.tail_integrable = false;
        prev = tail;
    }
    rep.integral_of_tail = rep.tail_table.front().second;
    rep.ok = rep.dominated_on_grid && rep.tail_integrable;
    return rep;
}

ConvexityReport check_convexity_in_u(const RunningCost& cost, const ControlValueSet& U,
                                     const std::vector<double>& t_grid, const std::vector<Vec>& x_grid,
                                     int samples, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto draw_u = [&] {
        Vec v(U.dim());
        for (int i = 0; i < U.dim(); ++i) {
            v(i) = U.is_compact() ? U.lower()(i) + unit(rng) * (U.upper()(i) - U.lower()(i)) : 10.0 * normal(rng);
        }
        return v;
    };
    ConvexityReport rep;
    for (double t : t_grid) {
        for (const auto& x : x_grid) {
            for (int s = 0; s < samples; ++s) {
                const Vec a = draw_u(), b = draw_u();
                const double lam = unit(rng);
                const Vec mix = lam * a + (1 - lam) * b;
                const double chord = lam * cost.ell2(t, x, a) + (1 - lam) * cost.ell2(t, x, b);
                const double gap = (cost.ell2(t, x, mix) - chord) / (1.0 + std::abs(chord));
                if (gap > rep.worst_gap) {
                    rep.worst_gap = gap;
                    rep.witness = {t, x, mix};
                }
            }
        }
    }
    rep.ok = rep.worst_gap <= 1e-12;
    return rep;
}

}  // namespace patternlab
