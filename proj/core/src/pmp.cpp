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

#include "patternlab/pmp.hpp"

#include "patternlab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace patternlab {

CostateTrajectory costate_integrate(const ProblemInstance& problem, const Trajectory& traj, const ControlSignal& u,
                                    double T, const CostateOptions& opts) {
    if (traj.blew_up() && traj.blow_up_time() <= T) throw BlowUpError("state blew up before T", traj.blow_up_time());
    if (!traj.covers(T)) throw IntegrationError("state trajectory is shorter than T");
    const auto& sys = problem.system;
    auto rhs = [&](double t, const Vec& p) -> Vec {
        const Vec x = traj.at(t);
        const Vec v = u.evaluate(t);
        return -problem.cost.gradient_x(t, x, v) - sys.state_jacobian(t, x, v).transpose() * p;
    };
    std::vector<double> bps = sys.coefficient_breakpoints;
    bps.insert(bps.end(), problem.cost.breakpoints.begin(), problem.cost.breakpoints.end());
    bps.insert(bps.end(), u.breakpoints().begin(), u.breakpoints().end());
    OdeOptions o;
    o.rtol = opts.rtol;
    o.atol = opts.atol;
    CostateTrajectory out;
    out.horizon = T;
    const double R = 1e150;
    out.solution = integrate_ode(rhs, T, 0.0, Vec::Zero(sys.state_dim), std::move(bps), o,
                                 [R](const Vec& p) { return !(p.norm() <= R); });
    if (out.solution.escaped) throw BlowUpError("costate blew up", out.solution.escape_time);
    return out;
}

double hamiltonian(const ProblemInstance& problem, double t, const Vec& x, const Vec& p, const Vec& u) {
    return problem.cost(t, x, u) + p.dot(problem.system.rhs(t, x, u));
}

SwitchingFunction switching_function(const ProblemInstance& problem, const Trajectory& traj,
                                     const CostateTrajectory& costate, const SwitchingOptions& opts) {
    const auto coeff = affine_control_coefficient(problem);
    const double T = costate.horizon;
    const auto& sys = problem.system;
    const int m = sys.control_dim;

    auto xs = std::make_shared<Trajectory>(traj);
    auto ps = std::make_shared<CostateTrajectory>(costate);
    auto parts = [coeff, xs, ps, sys](double t) {
        const Vec x = xs->at(t);
        const Vec c = coeff(t, x);
        const Vec bp = sys.input_matrix(t, x).transpose() * ps->at(t);
        return std::make_pair(c, bp);
    };

    SwitchingFunction sf;
    sf.evaluate = [parts](double t) {
        auto [c, bp] = parts(t);
        return Vec(c + bp);
    };
    sf.times = linspace(0.0, T, std::max(opts.samples, 2));
    for (double t : sf.times) {
        auto [c, bp] = parts(t);
        sf.values.push_back(c + bp);
        sf.scales.push_back(c.cwiseAbs() + bp.cwiseAbs());
    }
    sf.zero_crossings.resize(m);
    sf.singular_intervals.resize(m);
    const std::size_t K = sf.times.size();
    for (int i = 0; i < m; ++i) {
        std::vector<char> small(K, 0);
        for (std::size_t k = 0; k < K; ++k) {
            small[k] = std::abs(sf.values[k](i)) <= opts.singular_tol * sf.scales[k](i) ? 1 : 0;
        }
        std::vector<char> in_singular(K, 0);
        for (std::size_t k = 0; k < K;) {
            if (!small[k]) {
                ++k;
                continue;
            }
            std::size_t e = k;
            while (e + 1 < K && small[e + 1]) ++e;
            if (static_cast<int>(e - k) >= opts.singular_window) {
                sf.singular_intervals[i].emplace_back(sf.times[k], sf.times[e]);
                std::fill(in_singular.begin() + static_cast<long>(k), in_singular.begin() + static_cast<long>(e) + 1, 1);
            }
            k = e + 1;
        }
        for (std::size_t k = 0; k + 1 < K; ++k) {
            if (in_singular[k] || in_singular[k + 1]) continue;
            const double a = sf.values[k](i), b = sf.values[k + 1](i);
            if (a == 0.0 && k > 0) {
                sf.zero_crossings[i].push_back(sf.times[k]);
                continue;
            }
            if ((a < 0.0) == (b < 0.0) || b == 0.0) continue;
            double lo = sf.times[k], hi = sf.times[k + 1], flo = a;
            while (hi - lo > opts.root_tol) {
                const double mid = 0.5 * (lo + hi);
                const double fm = sf.evaluate(mid)(i);
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            sf.zero_crossings[i].push_back(0.5 * (lo + hi));
        }
    }
    return sf;
}

ExtremalReport verify_extremal(const ProblemInstance& problem, const ControlSignal& u, double T,
                               const ExtremalOptions& opts) {
    const auto& U = problem.control_set;
    if (!U.is_compact()) throw InapplicableError("extremal verification needs a box control set");
    const Trajectory traj = integrate(problem.system, u, problem.x0, T, opts.integration);
    if (traj.blew_up()) throw BlowUpError("state blew up under the candidate control", traj.blow_up_time());
    const CostateTrajectory p = costate_integrate(problem, traj, u, T, opts.costate);

    ExtremalReport rep;
    rep.phi = switching_function(problem, traj, p, opts.switching);
    const auto& sf = rep.phi;
    const int m = problem.system.control_dim;
    const double vtol = 1e-12;
    const double dt = sf.times.size() > 1 ? sf.times[1] - sf.times[0] : 0.0;

    // Per-piece singular residuals.
    const auto& bps = u.breakpoints();
    std::vector<double> piece_residual(u.pieces().size(), 0.0);

    for (std::size_t k = 0; k < sf.times.size(); ++k) {
        const double t = sf.times[k];
        if (t >= T) continue;
        const Vec v = u.evaluate(t);
        const auto piece = static_cast<std::size_t>(std::upper_bound(bps.begin(), bps.end(), t) - bps.begin()) - 1;
        bool violated = false;
        for (int i = 0; i < m; ++i) {
            const double phi = sf.values[k](i);
            const double scale = std::max(sf.scales[k](i), 1e-300);
            const bool at_lower = std::abs(v(i) - U.lower()(i)) <= vtol;
            const bool at_upper = std::abs(v(i) - U.upper()(i)) <= vtol;
            if (at_lower && at_upper) continue;
            if (at_lower || at_upper) {
                const double viol = at_lower ? std::max(0.0, -phi / scale) : std::max(0.0, phi / scale);
                rep.max_sign_violation = std::max(rep.max_sign_violation, viol);
                if (viol > opts.tol) violated = true;
            } else {
                rep.max_singular_phi = std::max(rep.max_singular_phi, std::abs(phi) / scale);
                if (problem.singular_residual) {
                    const double r = std::abs((*problem.singular_residual)(t, traj.at(t)));
                    piece_residual[piece] = std::max(piece_residual[piece], r);
                    rep.max_singular_residual = std::max(rep.max_singular_residual, r);
                }
            }
        }
        if (violated) rep.violation_duration += dt;
    }
    for (std::size_t j = 0; j < u.pieces().size(); ++j) {
        const Vec& v = u.pieces()[j];
        bool interior = false;
        for (int i = 0; i < m; ++i) {
            interior = interior || (v(i) > U.lower()(i) + vtol && v(i) < U.upper()(i) - vtol);
        }
        if (interior && bps[j + 1] > bps[j]) rep.singular_arc_residuals.push_back(piece_residual[j]);
    }
    rep.consistent = rep.max_sign_violation <= opts.tol && rep.max_singular_phi <= opts.switching.singular_tol &&
                     rep.max_singular_residual <= opts.residual_tol;
    return rep;
}

}  // namespace patternlab
