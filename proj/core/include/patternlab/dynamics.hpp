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
#include "patternlab/signals.hpp"
#include "patternlab/types.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace patternlab {

using StateFn = std::function<Vec(double, const Vec&)>;
using MatrixFn = std::function<Mat(double, const Vec&)>;

/// x' = a(t,x) + b(t,x) u.
struct ControlAffineSystem {
    int state_dim = 1;
    int control_dim = 1;
    StateFn drift;
    MatrixFn input_matrix;
    /// d a / d x, n x n. Finite differences when absent.
    std::optional<MatrixFn> drift_jacobian;
    /// d (b u) / d x for a given u, n x n. Finite differences when absent.
    std::optional<std::function<Mat(double, const Vec&, const Vec&)>> input_jacobian;
    /// Times where a or b jump (the integrator restarts there).
    std::vector<double> coefficient_breakpoints;

    Vec rhs(double t, const Vec& x, const Vec& u) const;
    /// d/dx of a(t,x) + b(t,x) u.
    Mat state_jacobian(double t, const Vec& x, const Vec& u) const;
};

struct IntegrationOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double escape_radius = 1e9;
    double event_time_tol = 1e-10;
    double initial_step = 0.0;
    double max_step = kInf;
};

/// Sampled state path with dense interpolation.
class Trajectory {
public:
    Trajectory() = default;
    explicit Trajectory(DenseSolution sol);

    const std::vector<double>& times() const { return sol_.t; }
    const std::vector<Vec>& states() const { return sol_.y; }
    bool blew_up() const { return sol_.escaped; }
    double blow_up_time() const { return sol_.escape_time; }
    double start() const { return sol_.t.front(); }
    double end() const { return sol_.t.back(); }
    const Vec& initial_state() const { return sol_.y.front(); }
    const Vec& final_state() const { return sol_.y.back(); }

    /// Dense value; past the last node the exponential tail applies when one was attached.
    Vec at(double t) const;
    bool covers(double t) const;
    /// Start of the exponential tail, or +inf.
    double tail_start() const { return tail_start_; }

    /// Rows `t,x1,..,xn` sampled every `step` from start to end (end included).
    void write_csv(std::ostream& os, double step) const;

    /// Dense output with an exponential tail x(T) e^{-(t-T)} from T on.
    Trajectory with_tail(double T, double span_end) const;

private:
    DenseSolution sol_;
    double tail_start_ = kInf;
    double tail_end_ = kInf;
    Vec tail_value_;
};

/// Solves x' = a + b u(t) from x0 on [0, t_end], restarting at control and coefficient breakpoints.
Trajectory integrate(const ControlAffineSystem& system, const ControlSignal& u, const Vec& x0, double t_end,
                     const IntegrationOptions& opts = {});

/// Keeps the trajectory on [0, T] and continues it by x(T) e^{-(t-T)} up to span_end.
Trajectory extend_tail(const Trajectory& traj, double T, double span_end);

struct LipschitzReport {
    double max_ratio = 0.0;
    Vec witness_x1;
    Vec witness_x2;
    double witness_t = 0.0;
};

/// Largest |f(t,x1) - f(t,x2)| / |x1 - x2| over grid pairs in the box and sampled times.
/// `u` is held fixed; pass a zero vector to probe the drift only.
LipschitzReport lipschitz_probe(const ControlAffineSystem& system, const Box& box, double t_lo, double t_hi,
                                int samples, const Vec& u);

}  // namespace patternlab
