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
#include "patternlab/pmp.hpp"
#include "patternlab/problem.hpp"
#include "patternlab/signals.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace patternlab {

struct TemplatePiece {
    Vec value;
    /// Free pieces are optimized inside U; the stored value is the starting guess.
    bool free = false;
};

/// Piecewise-constant pattern with N pieces and N - 1 interior breakpoints.
struct PatternTemplate {
    std::vector<TemplatePiece> pieces;
    /// Interior breakpoints pinned to a time; empty, or one entry per interior breakpoint.
    std::vector<std::optional<double>> fixed_breakpoints;

    static PatternTemplate from_values(const std::vector<double>& values);
    int size() const { return static_cast<int>(pieces.size()); }
    int free_breakpoint_count() const;
    void validate(const ControlValueSet& U, double T) const;
};

struct IterationRecord {
    int iteration = 0;
    double cost = 0.0;
    double step = 0.0;
    double residual = 0.0;
};

void write_log_csv(std::ostream& os, const std::vector<IterationRecord>& log);


struct SolverOptions {
    IntegrationOptions integration;
    double quad_tol = 1e-10;
    unsigned long long seed = 0;
    int multistarts = 5;
    int max_iters = 600;  ///< per Nelder-Mead run
    double simplex_tol = 1e-10;
    bool golden_polish = true;
    bool gradient_polish = true;
    CostateOptions costate;
    /// Interior breakpoints to start from, e.g. the previous horizon's solution.
    std::optional<std::vector<double>> warm_start;
};

struct SwitchingSolution {
    ControlSignal control;
    std::vector<double> breakpoints;  ///< interior breakpoints
    std::vector<Vec> values;          ///< piece values
    double cost = kInf;
    bool converged = false;
    int evaluations = 0;
    std::vector<IterationRecord> log;
};

/// Cost of the template with the given interior breakpoints and piece values; +inf on blow-up.
double pattern_cost(const ProblemInstance& problem, const std::vector<double>& breakpoints,
                    const std::vector<Vec>& values, double T, const IntegrationOptions& iopts, double quad_tol);

/// Minimizes the cost over the template's free breakpoints (and free values).
SwitchingSolution solve_switching_times(const ProblemInstance& problem, const PatternTemplate& pattern, double T,
                                        const SolverOptions& opts = {});

struct BruteForceResult {
    double tau = 0.0;
    double cost = kInf;
};

/// Exhaustive scan of the single free breakpoint over {0, step, 2 step, ..., T}.
BruteForceResult brute_force_oracle(const ProblemInstance& problem, const PatternTemplate& pattern, double T,
                                    double grid_step, const IntegrationOptions& iopts = {}, double quad_tol = 1e-10);

/// One control vector per cell of a uniform mesh on [0, T].
struct DiscretizedControl {
    double horizon = 0.0;
    std::vector<Vec> cells;

    int size() const { return static_cast<int>(cells.size()); }
    double cell_width() const { return horizon / static_cast<double>(cells.size()); }
    ControlSignal to_signal(const Vec& tail) const;
};

struct DirectOptions {
    IntegrationOptions integration;
    double quad_tol = 1e-11;
    int max_iters = 3000;
    double gtol = 1e-8;
    double armijo = 1e-4;
    CostateOptions costate;
    std::optional<std::vector<Vec>> initial;
};

struct DirectSolution {
    DiscretizedControl control;
    double cost = kInf;
    double kkt_residual = kInf;
    bool converged = false;
    bool line_search_failed = false;
    std::vector<IterationRecord> log;
};

/// Projected gradient with Barzilai-Borwein steps and Armijo backtracking on M cells.
DirectSolution solve_direct(const ProblemInstance& problem, double T, int M, const DirectOptions& opts = {});

/// Integral over each cell of dH/du along the state and costate of `control`.
std::vector<Vec> cell_gradients(const ProblemInstance& problem, const DiscretizedControl& control,
                                const IntegrationOptions& iopts, const CostateOptions& copts, double quad_tol,
                                double* cost = nullptr);

}  // namespace patternlab
