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

#include "patternlab/costs.hpp"
#include "patternlab/dynamics.hpp"
#include "patternlab/signals.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace patternlab {

/// Candidate storage function with an optional analytic gradient.
struct StorageCandidate {
    std::string name;
    std::function<double(const Vec&)> S;
    std::optional<std::function<Vec(const Vec&)>> gradient;

    double operator()(const Vec& x) const { return S(x); }
    /// Analytic gradient, or central differences with h = cbrt(eps) (1 + |x_i|).
    Vec grad(const Vec& x) const;
};

struct StorageCertificate {
    StorageCandidate storage;
    StageCostFn supply;
    Box domain;
    std::vector<double> coercivity_radii{1, 10, 100, 1e3, 1e4, 1e5, 1e6};
};

struct DifferentialOptions {
    int points_per_axis = 65;
    int refinement_rounds = 2;
    double tolerance = 1e-9;
};

struct DifferentialReport {
    bool ok = false;
    double grid_worst_margin = kInf;
    /// min of r - <grad S, a + b u> after local refinement.
    double worst_margin = kInf;
    SamplePoint witness;
    /// max of <grad S, a + b u> / r over points with r > 0, after refinement.
    double worst_ratio = -kInf;
    SamplePoint ratio_witness;
    bool nonnegative = true;
    std::optional<Vec> negative_witness;
    bool gradient_consistent = true;
    double gradient_mismatch = 0.0;
    std::string grid_spec;
};

/// Time samples on [0, t_max] plus points just before and after every breakpoint.
std::vector<double> dissipation_time_grid(double t_max, const std::vector<double>& breakpoints, int points = 9);
/// Per-axis grid over U; for a box the vertices are on it.
std::vector<Vec> control_grid(const ControlValueSet& U, int points_per_axis, double full_space_radius = 10.0);

/// Samples r - <grad S, a + b u> on t_grid x x_grid x u_grid and refines around the extremes.
DifferentialReport check_differential(const StorageCertificate& cert, const ControlAffineSystem& system,
                                      const ControlValueSet& U, const std::vector<double>& t_grid,
                                      const std::vector<Vec>& x_grid, const std::vector<Vec>& u_grid,
                                      const DifferentialOptions& opts = {});

/// Same with grids built from the certificate's domain (points_per_axis per state axis).
DifferentialReport check_differential(const StorageCertificate& cert, const ControlAffineSystem& system,
                                      const ControlValueSet& U, double t_max, const DifferentialOptions& opts = {});

struct IntegralReport {
    bool ok = true;
    /// max over samples and check times of S(x(t)) - S(x0) - integral of r over [0, t].
    double worst_violation = -kInf;
    std::size_t witness_x0 = 0;
    std::size_t witness_control = 0;
    double witness_time = 0.0;
    /// Earliest time any sample violates the inequality by more than tol, or +inf.
    double first_violation_time = kInf;
    bool truncated_by_blow_up = false;
};

IntegralReport check_integral(const StorageCertificate& cert, const ControlAffineSystem& system,
                              const std::vector<Vec>& x0_samples, const std::vector<ControlSignal>& controls, double T,
                              double tol, const IntegrationOptions& iopts = {}, double quad_tol = 1e-12);

enum class CoercivityVerdict { CoerciveEvidence, NonCoerciveEvidence, Inconclusive };
std::string to_string(CoercivityVerdict v);

struct CoercivityReport {
    CoercivityVerdict verdict = CoercivityVerdict::Inconclusive;
    std::vector<std::pair<double, double>> growth_table;  ///< (R, min of S on |x| = R)
};

CoercivityReport check_coercivity(const StorageCandidate& storage, int dim, const std::vector<double>& radii,
                                  int directions = 256, unsigned long long seed = 1);

/// Constants entering the sublevel bound on S along cost-bounded trajectories.
struct BoundConstants {
    double cost_cap = 0.0;   ///< C
    double gamma_l1 = 0.0;   ///< L1 norm of the lower-bound defect
    double alpha = 1.0;      ///< growth constant, used when p is finite
    double exponent = kInf;  ///< p
};

struct BoundednessReport {
    bool ok = true;
    double bound = 0.0;  ///< M
    double storage_sup = 0.0;
    double state_sup = 0.0;
    std::vector<double> per_sample_state_sup;
    std::vector<double> per_sample_storage_sup;
    std::size_t worst_sample = 0;
};

/// M = S(x0) + C + |gamma|_1, plus alpha D with D = (C + |gamma|_1) / min(1, alpha) when p is finite.
double sublevel_bound(const StorageCandidate& storage, const Vec& x0, const BoundConstants& k);

BoundednessReport uniform_boundedness_probe(const StorageCandidate& storage, const ControlAffineSystem& system,
                                            const Vec& x0, const std::vector<ControlSignal>& controls,
                                            double horizon, const BoundConstants& k, double tol = 1e-9,
                                            const IntegrationOptions& iopts = {});

}  // namespace patternlab
