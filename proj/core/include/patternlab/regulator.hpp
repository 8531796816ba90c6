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

#include "patternlab/ode.hpp"
#include "patternlab/problem.hpp"
#include "patternlab/solvers.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace patternlab {

/// Matrix path P(t) on [0, T] with P(T) = 0.
class RiccatiPath {
public:
    RiccatiPath() = default;
    RiccatiPath(DenseSolution sol, int n, Mat B, Mat R);

    double horizon() const { return sol_.back(); }
    const std::vector<double>& times() const { return sol_.t; }
    Mat at(double t) const;
    /// K(t) = R^-1 B^T P(t).
    Mat gain(double t) const;
    /// Rows `t,p_11,p_12,..` in row-major order at every node.
    void write_csv(std::ostream& os) const;

private:
    DenseSolution sol_;
    int n_ = 0;
    Mat B_;
    Mat R_;
};

/// Backward solve of -P' = A^T P + P A - P B R^-1 B^T P + Q, P(T) = 0, symmetrized every step.
RiccatiPath riccati_finite(const Mat& A, const Mat& B, const Mat& Q, const Mat& R, double T, double tol = 1e-12);

struct AlgebraicRiccati {
    Mat P;
    double residual = kInf;
    int iterations = 0;
    double seed_horizon = 0.0;
};

/// Newton-Kleinman from the gain of a long finite-horizon solution; residual in the max-abs norm.
AlgebraicRiccati riccati_algebraic(const Mat& A, const Mat& B, const Mat& Q, const Mat& R, double tol = 1e-10);

/// Residual A^T P + P A - P B R^-1 B^T P + Q.
Mat riccati_residual(const Mat& A, const Mat& B, const Mat& Q, const Mat& R, const Mat& P);

struct LinearData {
    Mat A, B, Q;
};

/// l = l1(t,x) + u^T R u over square-integrable controls.
struct QRProblem {
    std::string name;
    ControlAffineSystem system;
    Mat R;
    StateCostFn ell1;
    Vec x0;
    /// |a(t,x)| + |b(t,x)| <= K (1 + |x|).
    double growth_constant = 1.0;
    /// Set for linear instances x' = A x + B u, l1 = x^T Q x; enables the Riccati oracle.
    std::optional<LinearData> linear;

    /// Checks R and the growth constant on a sample box; throws std::invalid_argument.
    void validate(const Box& sample_box = Box{Vec::Constant(1, -10.0), Vec::Constant(1, 10.0)}) const;
    ProblemInstance to_problem() const;

    static QRProblem linear_instance(const Mat& A, const Mat& B, const Mat& Q, const Mat& R, const Vec& x0);
};

struct QRExperimentOptions {
    int cells_per_unit = 20;
    /// Comparison window [0, W]; 0 selects the first horizon.
    double window = 0.0;
    double cauchy_tol = 1e-3;
    DirectOptions direct;
};

struct QRHorizonRow {
    double horizon = 0.0;
    double cost = kInf;
    double kkt_residual = kInf;
    bool ok = false;
    std::string error;
    /// Window L2 distance to the previous horizon's control.
    std::optional<double> window_distance;
    std::optional<double> riccati_cost;
    /// Window L2 distance to the Riccati feedback rollout.
    std::optional<double> feedback_distance;
};

enum class QRAlternative { InfiniteCost, ConvergentControls, Undetermined };
std::string to_string(QRAlternative a);

struct QRExperimentReport {
    std::vector<QRHorizonRow> rows;
    QRAlternative verdict = QRAlternative::Undetermined;
    double window = 0.0;
    std::vector<DiscretizedControl> controls;
    /// Evidence wording: Cauchy behaviour on a window cannot tell sequence from subsequence convergence.
    std::string note;

    void write_csv(std::ostream& os) const;
};

QRExperimentReport qr_horizon_experiment(const QRProblem& qr, const std::vector<double>& horizons,
                                         const QRExperimentOptions& opts = {});

}  // namespace patternlab
