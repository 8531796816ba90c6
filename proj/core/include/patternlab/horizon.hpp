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

#include "patternlab/dissipativity.hpp"
#include "patternlab/problem.hpp"
#include "patternlab/solvers.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace patternlab {

enum class LimitFlag { FiniteLimit, DivergesToInfinity, Undetermined };
std::string to_string(LimitFlag f);

struct HorizonEntry {
    double horizon = 0.0;
    std::vector<double> breakpoints;  ///< interior breakpoints
    std::vector<Vec> values;
    double cost = kInf;
    bool ok = false;
    bool converged = false;
    std::string error;
};

struct PatternResult {
    std::vector<HorizonEntry> entries;
    std::vector<double> limit_breakpoints;  ///< +inf for divergent breakpoints
    std::vector<Vec> limit_values;
    std::vector<LimitFlag> flags;

    bool all_determined() const;
    /// One row per horizon: T, tau_1.., u_1_1.., cost, status.
    void write_csv(std::ostream& os) const;
};

struct SweepOptions {
    SolverOptions solver;
    double conv_tol = 1e-3;
    /// tau / T above this on the tail counts as divergence.
    double ratio_floor = 0.05;
    bool warm_start = true;
};

/// Solves every horizon in order, warm-starting from the previous ones, and classifies the breakpoints.
PatternResult horizon_sweep(const ProblemInstance& problem, const PatternTemplate& pattern,
                            const std::vector<double>& horizons, const SweepOptions& opts = {});

/// Reclassifies breakpoint limits from the recorded entries.
void classify_limits(PatternResult& result, double conv_tol, double ratio_floor = 0.05);

/// Limit signal on [0, inf) with empty pieces dropped; throws when a flag is undetermined.
ControlSignal limit_control(const PatternResult& result, const Vec& tail);

enum class CostLimit { Converges, DivergesPlus, DivergesMinus, Undetermined };
std::string to_string(CostLimit c);

struct InfiniteCostEstimate {
    std::vector<std::pair<double, double>> truncations;  ///< (T, J_T)
    CostLimit limit = CostLimit::Undetermined;
    double tail_bound = kInf;
    double lower = -kInf;  ///< J_inf interval
    double upper = kInf;
    bool extrapolated = false;
    /// Value used for comparisons: the interval midpoint or +-inf.
    double value() const;
};

/// Truncated costs J_T of an infinite-horizon control and a divergence test on their increments.
InfiniteCostEstimate infinite_cost_estimate(const ProblemInstance& problem, const ControlSignal& u,
                                            const std::vector<double>& truncations = {5, 10, 20, 40},
                                            double quad_tol = 1e-10);

struct HypothesisChecklist {
    bool dissipativity = false;
    bool storage_coercive = false;
    bool decomposition = false;
    bool domination = false;
    bool growth_or_compact = false;
    bool regularity = false;
    std::vector<std::string> notes;

    bool all() const;
    /// key=value lines.
    void write(std::ostream& os) const;
};

struct ChecklistOptions {
    Box state_box{Vec::Constant(1, -100.0), Vec::Constant(1, 100.0)};
    double t_max = 10.0;
    DifferentialOptions differential;
};

/// Evaluates every hypothesis; the storage flags fail when no candidate is given.
HypothesisChecklist compute_checklist(const ProblemInstance& problem, const std::optional<StorageCandidate>& storage,
                                      const ChecklistOptions& opts = {});

enum class PreservationVerdict {
    PredictedAndConfirmed,
    PredictedUnconfirmed,
    NotPredictedCounterexampleFound,
    NotPredictedNoCounterexample
};
std::string to_string(PreservationVerdict v);

struct Challenger {
    std::string name;
    ControlSignal control;
};

struct PreservationReport {
    PreservationVerdict verdict = PreservationVerdict::NotPredictedNoCounterexample;
    HypothesisChecklist checklist;
    PatternResult sweep;
    std::optional<ControlSignal> limit;
    InfiniteCostEstimate limit_cost;
    std::vector<std::pair<Challenger, InfiniteCostEstimate>> challengers;
    /// Name of the first challenger that beats the limit control.
    std::optional<std::string> counterexample;
};

/// Constant u_star plus one constant control per vertex of a box.
std::vector<Challenger> default_challengers(const ProblemInstance& problem);

/// Checklist verdict combined with J_inf(limit) <= J_inf(c) for every challenger, in extended reals.
PreservationReport pattern_preservation_report(const ProblemInstance& problem, const PatternTemplate& pattern,
                                               const std::vector<double>& horizons,
                                               const HypothesisChecklist& checklist,
                                               std::vector<Challenger> challengers = {},
                                               const SweepOptions& opts = {},
                                               const std::vector<double>& truncations = {5, 10, 20, 40});

struct EquicoercivityReport {
    struct Sample {
        double horizon = 0.0;
        std::size_t index = 0;
        double cost = kInf;
        bool feasible = false;  ///< cost <= C
        double state_sup = 0.0;
    };
    std::vector<Sample> samples;
    bool bounded = true;
    double bound = 0.0;
};

/// sup |x| over each sample with cost <= C; unbounded when the last horizon raises the running max.
EquicoercivityReport equicoercivity_probe(const ProblemInstance& problem, const std::vector<double>& horizons,
                                          double cost_cap,
                                          const std::function<std::vector<ControlSignal>(double)>& samples,
                                          double rel_tol = 1e-6, const IntegrationOptions& iopts = {});

struct CrossoverRow {
    double horizon = 0.0;
    double cost_a = kInf;
    double cost_b = kInf;
    std::optional<double> cost_direct;
};

struct CrossoverReport {
    std::vector<CrossoverRow> rows;
    /// First grid horizon from which template a stays strictly cheaper than b.
    std::optional<double> crossover;
    void write_csv(std::ostream& os) const;
};

struct CrossoverOptions {
    SolverOptions solver;
    /// Direct-solver cells per unit time; 0 skips the direct solve.
    int cells_per_unit = 0;
    DirectOptions direct;
    /// Template a wins only by more than tie_tol * max(1, |cost_b|).
    double tie_tol = 1e-8;
};

/// Optimal costs of two templates on each horizon, plus an independent direct solve.
CrossoverReport compare_templates(const ProblemInstance& problem, const PatternTemplate& a, const PatternTemplate& b,
                                  const std::vector<double>& horizons, const CrossoverOptions& opts = {});

}  // namespace patternlab
