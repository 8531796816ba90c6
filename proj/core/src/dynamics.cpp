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

#include "patternlab/dynamics.hpp"

#include "patternlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace patternlab {

Vec ControlAffineSystem::rhs(double t, const Vec& x, const Vec& u) const {
    if (x.size() != state_dim || u.size() != control_dim) throw DimensionError("state or control dimension mismatch");
    Vec f = drift(t, x);
    const Mat B = input_matrix(t, x);
    if (f.size() != state_dim || B.rows() != state_dim || B.cols() != control_dim)
        throw DimensionError("drift or input matrix has the wrong shape");
    f.noalias() += B * u;
    return f;
}

Mat ControlAffineSystem::state_jacobian(double t, const Vec& x, const Vec& u) const {
    if (drift_jacobian && input_jacobian) return (*drift_jacobian)(t, x) + (*input_jacobian)(t, x, u);
    const int n = state_dim;
    Mat J(n, n);
    const double base = std::cbrt(std::numeric_limits<double>::epsilon());
    for (int j = 0; j < n; ++j) {
        const double h = base * (1.0 + std::abs(x(j)));
        Vec xp = x, xm = x;
        xp(j) += h;
        xm(j) -= h;
        J.col(j) = (rhs(t, xp, u) - rhs(t, xm, u)) / (2 * h);
    }
    return J;
}

Trajectory::Trajectory(DenseSolution sol) : sol_(std::move(sol)) {}

bool Trajectory::covers(double t) const {
    if (sol_.t.empty()) return false;
    const double slack = 1e-12 * std::max(1.0, std::abs(t));
    const double last = std::isfinite(tail_start_) ? tail_end_ : sol_.t.back();
    return t >= sol_.t.front() - slack && t <= last + slack;
}

Vec Trajectory::at(double t) const {
    if (t > tail_start_) return tail_value_ * std::exp(-(t - tail_start_));
    return sol_.at(t);
}

void Trajectory::write_csv(std::ostream& os, double step) const {
    const double t0 = start();
    const double t1 = std::isfinite(tail_end_) ? tail_end_ : end();
    os << "t";
    for (Eigen::Index i = 0; i < initial_state().size(); ++i) os << ",x" << (i + 1);
    os << "\n";
    const auto count = static_cast<long>(std::floor((t1 - t0) / step + 1e-9));
    for (long k = 0; k <= count + 1; ++k) {
        double t = t0 + static_cast<double>(k) * step;
        if (k == count + 1) {
            if (t1 - (t0 + static_cast<double>(count) * step) <= 1e-12 * std::max(1.0, t1)) break;
            t = t1;
        }
        const Vec x = at(t);
        os << format_number(t);
        for (Eigen::Index i = 0; i < x.size(); ++i) os << ',' << format_number(x(i));
        os << "\n";
    }
}

Trajectory Trajectory::with_tail(double T, double span_end) const {
    if (sol_.escaped && sol_.escape_time <= T) throw BlowUpError("trajectory blew up before T", sol_.escape_time);
    if (T > sol_.t.back() + 1e-12 * std::max(1.0, T)) throw IntegrationError("trajectory does not reach T");
    if (!(span_end > T)) throw std::invalid_argument("tail must extend beyond T");
    DenseSolution cut;
    for (std::size_t k = 0; k < sol_.t.size() && sol_.t[k] < T; ++k) {
        cut.t.push_back(sol_.t[k]);
        cut.y.push_back(sol_.y[k]);
        cut.dy_left.push_back(sol_.dy_left[k]);
        cut.dy_right.push_back(sol_.dy_right[k]);
    }
    const Vec xT = sol_.at(T);
    const Vec dleft = sol_.derivative(T);
    cut.t.push_back(T);
    cut.y.push_back(xT);
    cut.dy_left.push_back(dleft);
    cut.dy_right.push_back(-xT);
    Trajectory out(std::move(cut));
    out.tail_start_ = T;
    out.tail_end_ = span_end;
    out.tail_value_ = xT;
    return out;
}

Trajectory integrate(const ControlAffineSystem& system, const ControlSignal& u, const Vec& x0, double t_end,
                     const IntegrationOptions& opts) {
    if (!std::isfinite(t_end) || !(t_end > 0.0)) throw std::invalid_argument("integration end must be finite and positive");
    if (x0.size() != system.state_dim) throw DimensionError("initial state dimension mismatch");
    if (u.dim() != system.control_dim) throw DimensionError("control dimension mismatch");
    if (!(opts.rtol > 0.0) || !(opts.atol > 0.0)) throw std::invalid_argument("tolerances must be positive");
    if (!(opts.escape_radius > x0.norm())) throw std::invalid_argument("escape radius must exceed |x0|");

    std::vector<double> bps = system.coefficient_breakpoints;
    bps.insert(bps.end(), u.breakpoints().begin(), u.breakpoints().end());
    OdeOptions ode;
    ode.rtol = opts.rtol;
    ode.atol = opts.atol;
    ode.initial_step = opts.initial_step;
    ode.max_step = opts.max_step;
    ode.event_time_tol = opts.event_time_tol;
    const double R = opts.escape_radius;
    auto rhs = [&](double t, const Vec& x) { return system.rhs(t, x, u.value_at(t)); };
    auto escaped = [R](const Vec& x) { return !(x.norm() <= R); };
    return Trajectory(integrate_ode(rhs, 0.0, t_end, x0, std::move(bps), ode, escaped));
}

Trajectory extend_tail(const Trajectory& traj, double T, double span_end) { return traj.with_tail(T, span_end); }

LipschitzReport lipschitz_probe(const ControlAffineSystem& system, const Box& box, double t_lo, double t_hi,
                                int samples, const Vec& u) {
    if (samples < 2) throw std::invalid_argument("lipschitz probe needs at least two samples per axis");
    const auto grid = box_grid(box, samples);
    const auto times = linspace(t_lo, t_hi, t_hi > t_lo ? samples : 1);
    LipschitzReport rep;
    rep.witness_x1 = grid.front();
    rep.witness_x2 = grid.front();
    for (double t : times) {
        std::vector<Vec> f;
        f.reserve(grid.size());
        for (const auto& x : grid) {
            Vec v = system.rhs(t, x, u);
            if (!v.allFinite()) throw IntegrationError("nonfinite dynamics in lipschitz probe");
            f.push_back(std::move(v));
        }
        for (std::size_t i = 0; i < grid.size(); ++i) {
            for (std::size_t j = i + 1; j < grid.size(); ++j) {
                const double dx = (grid[i] - grid[j]).norm();
                if (dx == 0.0) continue;
                const double ratio = (f[i] - f[j]).norm() / dx;
                if (ratio > rep.max_ratio) {
                    rep.max_ratio = ratio;
                    rep.witness_x1 = grid[i];
                    rep.witness_x2 = grid[j];
                    rep.witness_t = t;
                }
            }
        }
    }
    return rep;
}

}  // namespace patternlab
