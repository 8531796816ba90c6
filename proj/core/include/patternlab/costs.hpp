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

#include "patternlab/dynamics.hpp"
#include "patternlab/signals.hpp"
#include "patternlab/types.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace patternlab {

using StateCostFn = std::function<double(double, const Vec&)>;
using StageCostFn = std::function<double(double, const Vec&, const Vec&)>;

/// Lower bound alpha |u|^p - gamma(t) on the control-dependent part.
struct GrowthBound {
    double alpha = 1.0;
    std::function<double(double)> gamma = [](double) { return 0.0; };
    double gamma_l1 = 0.0;  ///< integral of gamma over [0, inf)
};

/// Integrable bound m(t) on the control part at the reference value, valid on the box K.
struct Dominator {
    Box K;
    std::function<double(double)> m;
};

/// l(t,x,u) = l1(t,x) + l2(t,x,u), extended-real valued.
struct RunningCost {
    StateCostFn ell1 = [](double, const Vec&) { return 0.0; };
    StageCostFn ell2 = [](double, const Vec&, const Vec&) { return 0.0; };
    std::optional<GrowthBound> growth;
    std::optional<Dominator> dominator;
    /// False for costs outside the nonnegative class (they still evaluate).
    bool sign_definite = true;
    /// Times where l jumps in t.
    std::vector<double> breakpoints;
    /// d l / d x; central differences when absent.
    std::optional<std::function<Vec(double, const Vec&, const Vec&)>> state_gradient;

    double operator()(double t, const Vec& x, const Vec& u) const;
    Vec gradient_x(double t, const Vec& x, const Vec& u) const;
};

/// Integral of l(t, x(t), u(t)) over [t0, t1]; +inf on a confirmed constraint hit.
double evaluate_cost(const RunningCost& cost, const Trajectory& traj, const ControlSignal& u, double t0, double t1,
                     double quad_tol);
inline double evaluate_cost(const RunningCost& cost, const Trajectory& traj, const ControlSignal& u, double T,
                            double quad_tol = 1e-10) {
    return evaluate_cost(cost, traj, u, 0.0, T, quad_tol);
}

/// 0 inside the box (with a 1e-9 closed band), +inf outside.
StateCostFn box_constraint_indicator(const Box& X);

struct SamplePoint {
    double t = 0.0;
    Vec x;
    Vec u;
};

struct GrowthReport {
    bool ok = false;
    double worst_margin = kInf;
    SamplePoint witness;
};

/// min over the grid of l2 - (alpha |u|^p - gamma(t)); ok iff it is >= -1e-9.
GrowthReport check_growth_condition(const RunningCost& cost, double exponent, const std::vector<double>& t_grid,
                                    const std::vector<Vec>& x_grid, const std::vector<Vec>& u_grid);

struct DominationReport {
    bool ok = false;
    bool dominated_on_grid = false;
    bool tail_integrable = false;
    double worst_gap = kInf;  ///< min of m(t) - l2(t,x,u_ref)
    SamplePoint witness;
    double integral_of_tail = kInf;  ///< integral of m over [t_grid.back(), inf)
    std::vector<std::pair<double, double>> tail_table;  ///< (T, integral of m over [T, inf))
};

/// Checks l2(t,x,u_ref) <= m(t) on K x t_grid and that the tail integrals of m vanish.
DominationReport check_reference_cost_domination(const RunningCost& cost, const Vec& u_ref,
                                                 const std::vector<double>& t_grid, int points_per_axis = 21);

struct ConvexityReport {
    bool ok = true;
    double worst_gap = 0.0;  ///< max of (l2(mix) - chord) / (1 + |chord|)
    SamplePoint witness;
};

/// Random chord test of convexity of l2 in u on sampled (t, x).
ConvexityReport check_convexity_in_u(const RunningCost& cost, const ControlValueSet& U,
                                     const std::vector<double>& t_grid, const std::vector<Vec>& x_grid,
                                     int samples, unsigned long long seed);

}  // namespace patternlab
