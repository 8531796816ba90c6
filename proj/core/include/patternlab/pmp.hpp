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
#include "patternlab/problem.hpp"
#include "patternlab/signals.hpp"

#include <functional>
#include <memory>
#include <utility>
#include <vector>

namespace patternlab {

struct CostateOptions {
    double rtol = 1e-10;
    double atol = 1e-22;
};

/// Adjoint path p on [0, T] with p(T) = 0.
struct CostateTrajectory {
    double horizon = 0.0;
    DenseSolution solution;

    Vec at(double t) const { return solution.at(t); }
    const std::vector<double>& times() const { return solution.t; }
};

/// Integrates p' = -d l/dx - (d(a + b u)/dx)^T p backward from p(T) = 0.
CostateTrajectory costate_integrate(const ProblemInstance& problem, const Trajectory& traj, const ControlSignal& u,
                                    double T, const CostateOptions& opts = {});

/// H(t,x,p,u) = l(t,x,u) + p . (a + b u).
double hamiltonian(const ProblemInstance& problem, double t, const Vec& x, const Vec& p, const Vec& u);

struct SwitchingOptions {
    int samples = 4001;
    double root_tol = 1e-12;
    /// Relative to |c| + |b^T p| at the sample.
    double singular_tol = 1e-7;
    int singular_window = 10;
};

/// phi(t) = c(t,x) + b(t,x)^T p sampled on [0, T], with roots and near-zero stretches per component.
struct SwitchingFunction {
    std::vector<double> times;
    std::vector<Vec> values;
    /// |c| + |b^T p| per sample, the reference size for relative tests.
    std::vector<Vec> scales;
    std::vector<std::vector<double>> zero_crossings;
    std::vector<std::vector<std::pair<double, double>>> singular_intervals;
    std::function<Vec(double)> evaluate;
};

SwitchingFunction switching_function(const ProblemInstance& problem, const Trajectory& traj,
                                     const CostateTrajectory& costate, const SwitchingOptions& opts = {});

struct ExtremalOptions {
    /// Allowed sign violation of phi relative to its scale.
    double tol = 1e-6;
    double residual_tol = 1e-4;
    SwitchingOptions switching;
    IntegrationOptions integration{1e-12, 1e-14};
    CostateOptions costate{1e-12, 1e-22};
};

struct ExtremalReport {
    bool consistent = false;
    double max_sign_violation = 0.0;  ///< relative to |c| + |b^T p|
    double violation_duration = 0.0;  ///< time measure of the sampled violations
    double max_singular_phi = 0.0;    ///< relative |phi| on singular pieces
    double max_singular_residual = 0.0;
    std::vector<double> singular_arc_residuals;  ///< one per singular piece
    SwitchingFunction phi;
};

/// Checks the minimum condition of u along its own state and costate.
///
/// Pieces at the lower vertex need phi >= 0, at the upper vertex phi <= 0; pieces strictly
/// inside U are treated as singular and need phi ~ 0 and a vanishing singular residual.
ExtremalReport verify_extremal(const ProblemInstance& problem, const ControlSignal& u, double T,
                               const ExtremalOptions& opts = {});

}  // namespace patternlab
