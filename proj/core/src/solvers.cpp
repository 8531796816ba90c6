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

#include "patternlab/solvers.hpp"

#include "patternlab/costs.hpp"
#include "patternlab/errors.hpp"
#include "patternlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

namespace patternlab {

PatternTemplate PatternTemplate::from_values(const std::vector<double>& values) {
    PatternTemplate t;
    for (double v : values) t.pieces.push_back({Vec::Constant(1, v), false});
    return t;
}

int PatternTemplate::free_breakpoint_count() const {
    const int interior = size() - 1;
    if (fixed_breakpoints.empty()) return interior;
    int n = 0;
    for (const auto& b : fixed_breakpoints) n += b ? 0 : 1;
    return n;
}

void PatternTemplate::validate(const ControlValueSet& U, double T) const {
    if (pieces.empty()) throw std::invalid_argument("a pattern needs at least one piece");
    if (!fixed_breakpoints.empty() && static_cast<int>(fixed_breakpoints.size()) != size() - 1)
        throw std::invalid_argument("fixed breakpoints must list every interior breakpoint");
    for (const auto& p : pieces) {
        if (p.value.size() != U.dim()) throw DimensionError("pattern value has the wrong dimension");
        if (!p.free && !U.contains(p.value)) throw std::invalid_argument("pattern value lies outside U");
    }
    double last = 0.0;
    for (const auto& b : fixed_breakpoints) {
        if (!b) continue;
        if (*b < last || *b > T) throw std::invalid_argument("fixed breakpoints must be nondecreasing inside [0, T]");
        last = *b;
    }
}

void write_log_csv(std::ostream& os, const std::vector<IterationRecord>& log) {
    os << "iteration,cost,step,residual\n";
    for (const auto& r : log) {
        os << r.iteration << ',' << format_number(r.cost) << ',' << format_number(r.step) << ','
           << format_number(r.residual) << "\n";
    }
}

namespace {

ControlSignal assemble(const std::vector<double>& interior, const std::vector<Vec>& values, double T, const Vec& tail) {
    std::vector<double> bps{0.0};
    bps.insert(bps.end(), interior.begin(), interior.end());
    bps.push_back(T);
    return ControlSignal(std::move(bps), values, tail);
}

// Decision vector layout: gaps of every run of free breakpoints between anchors, then free values.
class Layout {
public:
    Layout(const PatternTemplate& pattern, const ControlValueSet& U, double T) : U_(U), T_(T) {
        const int N = pattern.size();
        for (const auto& p : pattern.pieces) values_.push_back(p.value);
        fixed_.assign(static_cast<std::size_t>(std::max(N - 1, 0)), std::nullopt);
        if (!pattern.fixed_breakpoints.empty()) fixed_ = pattern.fixed_breakpoints;
        Run run{0.0, 0.0, {}, 0};
        for (int j = 0; j < N - 1; ++j) {
            if (fixed_[j]) {
                close(run, *fixed_[j]);
                run = Run{*fixed_[j], 0.0, {}, 0};
            } else {
                run.free.push_back(j);
            }
        }
        close(run, T);
        for (int i = 0; i < N; ++i) {
            if (pattern.pieces[i].free) free_pieces_.push_back(i);
        }
        vars_ = gap_vars_ + static_cast<int>(free_pieces_.size()) * U.dim();
    }

    int vars() const { return vars_; }
    int interior() const { return static_cast<int>(fixed_.size()); }

    void decode(const Vec& z, std::vector<double>& bps, std::vector<Vec>& values) const {
        bps.assign(fixed_.size(), 0.0);
        for (std::size_t j = 0; j < fixed_.size(); ++j) {
            if (fixed_[j]) bps[j] = *fixed_[j];
        }
        for (const auto& r : runs_) {
            const int k = static_cast<int>(r.free.size());
            double total = 0.0;
            for (int i = 0; i <= k; ++i) total += std::abs(z(r.offset + i));
            double acc = 0.0;
            for (int i = 0; i < k; ++i) {
                acc += total > 0.0 ? std::abs(z(r.offset + i)) / total : 1.0 / (k + 1);
                bps[r.free[i]] = std::min(r.B, r.A + (r.B - r.A) * acc);
            }
        }
        values = values_;
        int off = gap_vars_;
        for (int i : free_pieces_) {
            values[i] = U_.project(z.segment(off, U_.dim()));
            off += U_.dim();
        }
    }

    Vec encode(const std::vector<double>& bps, const std::vector<Vec>& values) const {
        Vec z(vars_);
        for (const auto& r : runs_) {
            const int k = static_cast<int>(r.free.size());
            const double width = r.B - r.A;
            double prev = r.A;
            for (int i = 0; i < k; ++i) {
                const double b = std::clamp(bps[r.free[i]], prev, r.B);
                z(r.offset + i) = width > 0 ? (b - prev) / width : 0.0;
                prev = b;
            }
            z(r.offset + k) = width > 0 ? (r.B - prev) / width : 1.0;
        }
        int off = gap_vars_;
        for (int i : free_pieces_) {
            z.segment(off, U_.dim()) = values[i];
            off += U_.dim();
        }
        return z;
    }

    Vec random_point(std::mt19937_64& rng) const {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        Vec z(vars_);
        for (int i = 0; i < gap_vars_; ++i) z(i) = unit(rng);
        int off = gap_vars_;
        for (std::size_t p = 0; p < free_pieces_.size(); ++p) {
            for (int i = 0; i < U_.dim(); ++i) {
                const double lo = U_.is_compact() ? U_.lower()(i) : -1.0;
                const double hi = U_.is_compact() ? U_.upper()(i) : 1.0;
                z(off + i) = lo + unit(rng) * (hi - lo);
            }
            off += U_.dim();
        }
        return z;
    }

    /// Initial simplex edge per coordinate.
    Vec steps() const {
        Vec s = Vec::Constant(vars_, 0.2);
        int off = gap_vars_;
        for (std::size_t p = 0; p < free_pieces_.size(); ++p) {
            for (int i = 0; i < U_.dim(); ++i) {
                s(off + i) = U_.is_compact() ? 0.25 * (U_.upper()(i) - U_.lower()(i)) : 0.5;
            }
            off += U_.dim();
        }
        return s;
    }

    bool is_free(int j) const { return !fixed_[j]; }

private:
    struct Run {
        double A, B;
        std::vector<int> free;
        int offset;
    };
    void close(Run run, double B) {
        if (run.free.empty()) return;
        run.B = B;
        run.offset = gap_vars_;
        gap_vars_ += static_cast<int>(run.free.size()) + 1;
        runs_.push_back(std::move(run));
    }

    const ControlValueSet& U_;
    double T_;
    std::vector<std::optional<double>> fixed_;
    std::vector<Vec> values_;
    std::vector<Run> runs_;
    std::vector<int> free_pieces_;
    int gap_vars_ = 0;
    int vars_ = 0;
};

struct NelderMeadResult {
    Vec x;
    double f = kInf;
    bool converged = false;
};

NelderMeadResult nelder_mead(const std::function<double(const Vec&)>& f, const Vec& x0, const Vec& step, int max_iters,
                             double tol, std::vector<IterationRecord>* log, int& iteration_counter) {
    const Eigen::Index n = x0.size();
    std::vector<Vec> xs{x0};
    for (Eigen::Index i = 0; i < n; ++i) {
        Vec v = x0;
        v(i) += step(i);
        xs.push_back(v);
    }
    std::vector<double> fs;
    for (const auto& x : xs) fs.push_back(f(x));
    std::vector<std::size_t> order(xs.size());
    NelderMeadResult res;
    for (int it = 0; it < max_iters; ++it) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];
        double size = 0.0;
        for (const auto& x : xs) size = std::max(size, (x - xs[best]).cwiseAbs().maxCoeff());
        const double spread = std::isfinite(fs[worst]) ? fs[worst] - fs[best] : kInf;
        if (log) log->push_back({++iteration_counter, fs[best], size, spread});
        if (size < tol && spread <= 1e-14 * (1.0 + std::abs(fs[best]))) {
            res.converged = true;
            break;
        }
        Vec centroid = Vec::Zero(n);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i != worst) centroid += xs[i];
        }
        centroid /= static_cast<double>(n);
        const Vec xr = centroid + (centroid - xs[worst]);
        const double fr = f(xr);
        if (fr < fs[best]) {
            const Vec xe = centroid + 2.0 * (centroid - xs[worst]);
            const double fe = f(xe);
            if (fe < fr) {
                xs[worst] = xe;
                fs[worst] = fe;
            } else {
                xs[worst] = xr;
                fs[worst] = fr;
            }
            continue;
        }
        if (fr < fs[second]) {
            xs[worst] = xr;
            fs[worst] = fr;
            continue;
        }
        const bool outside = fr < fs[worst];
        const Vec xc = outside ? Vec(centroid + 0.5 * (xr - centroid)) : Vec(centroid + 0.5 * (xs[worst] - centroid));
        const double fc = f(xc);
        if (fc < (outside ? fr : fs[worst])) {
            xs[worst] = xc;
            fs[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i == best) continue;
            xs[i] = xs[best] + 0.5 * (xs[i] - xs[best]);
            fs[i] = f(xs[i]);
        }
    }
    const auto bi = static_cast<std::size_t>(std::min_element(fs.begin(), fs.end()) - fs.begin());
    res.x = xs[bi];
    res.f = fs[bi];
    return res;
}

// Golden-section minimization of g on [a, b]; returns the better of the interior optimum and `current`.
std::pair<double, double> golden_min(const std::function<double(double)>& g, double a, double b, double current,
                                     double f_current, int iters = 60) {
    const double invphi = (std::sqrt(5.0) - 1) / 2;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = g(c), fd = g(d);
    for (int it = 0; it < iters && b - a > 1e-13 * std::max(1.0, std::abs(b)); ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = g(d);
        }
    }
    const double x = fc <= fd ? c : d, fx = std::min(fc, fd);
    if (fx < f_current) return {x, fx};
    return {current, f_current};
}

// dJ/dtau_j = H(u_j) - H(u_{j+1}) at tau_j along the control's own state and costate.
double switching_derivative(const ProblemInstance& problem, const std::vector<double>& bps,
                            const std::vector<Vec>& values, std::size_t j, double T, const SolverOptions& opts) {
    const ControlSignal u = assemble(bps, values, T, problem.u_star);
    const Trajectory traj = integrate(problem.system, u, problem.x0, T, opts.integration);
    if (traj.blew_up()) throw BlowUpError("blow-up during polish", traj.blow_up_time());
    const CostateTrajectory p = costate_integrate(problem, traj, u, T, opts.costate);
    const double t = bps[j];
    const Vec x = traj.at(t), pt = p.at(t);
    return hamiltonian(problem, t, x, pt, values[j]) - hamiltonian(problem, t, x, pt, values[j + 1]);
}

}  // namespace

double pattern_cost(const ProblemInstance& problem, const std::vector<double>& breakpoints,
                    const std::vector<Vec>& values, double T, const IntegrationOptions& iopts, double quad_tol) {
    const ControlSignal u = assemble(breakpoints, values, T, problem.u_star);
    try {
        const Trajectory traj = integrate(problem.system, u, problem.x0, T, iopts);
        if (traj.blew_up()) return kInf;
        return evaluate_cost(problem.cost, traj, u, T, quad_tol);
    } catch (const BlowUpError&) {
        return kInf;
    } catch (const IntegrationError&) {
        return kInf;
    }
}

SwitchingSolution solve_switching_times(const ProblemInstance& problem, const PatternTemplate& pattern, double T,
                                        const SolverOptions& opts) {
    if (!std::isfinite(T) || !(T > 0.0)) throw std::invalid_argument("horizon must be finite and positive");
    pattern.validate(problem.control_set, T);
    const Layout layout(pattern, problem.control_set, T);
    SwitchingSolution sol;
    int evals = 0;

    std::vector<double> bps;
    std::vector<Vec> values;
    auto cost_of = [&](const std::vector<double>& b, const std::vector<Vec>& v) {
        ++evals;
        return pattern_cost(problem, b, v, T, opts.integration, opts.quad_tol);
    };
    auto objective = [&](const Vec& z) {
        layout.decode(z, bps, values);
        return cost_of(bps, values);
    };

    if (layout.vars() == 0) {
        layout.decode(Vec(), bps, values);
        sol.cost = cost_of(bps, values);
        sol.converged = true;
    } else {
        std::vector<Vec> starts;
        if (opts.warm_start && static_cast<int>(opts.warm_start->size()) == layout.interior()) {
            std::vector<double> w = *opts.warm_start;
            for (double& b : w) b = std::clamp(b, 0.0, T);
            std::sort(w.begin(), w.end());
            std::vector<Vec> v0;
            for (const auto& p : pattern.pieces) v0.push_back(p.value);
            starts.push_back(layout.encode(w, v0));
        }
        {
            std::vector<double> even(static_cast<std::size_t>(layout.interior()));
            for (int j = 0; j < layout.interior(); ++j) even[j] = T * (j + 1) / pattern.size();
            std::vector<Vec> v0;
            for (const auto& p : pattern.pieces) v0.push_back(p.value);
            starts.push_back(layout.encode(even, v0));
        }
        std::mt19937_64 rng(opts.seed);
        for (int s = 0; s < opts.multistarts; ++s) starts.push_back(layout.random_point(rng));

        NelderMeadResult best;
        int counter = 0;
        for (const auto& z0 : starts) {
            NelderMeadResult r = nelder_mead(objective, z0, layout.steps(), opts.max_iters, opts.simplex_tol, &sol.log, counter);
            if (r.f < best.f) best = r;  // strict: the earliest start wins ties
        }
        layout.decode(best.x, bps, values);
        sol.cost = best.f;
        sol.converged = best.converged;
    }

    // Coordinate-wise polish of free breakpoints.
    const int nb = layout.interior();
    auto neighbours = [&](int j) {
        const double lo = j == 0 ? 0.0 : bps[j - 1];
        const double hi = j == nb - 1 ? T : bps[j + 1];
        return std::make_pair(lo, hi);
    };
    if (opts.golden_polish && std::isfinite(sol.cost)) {
        for (int j = 0; j < nb; ++j) {
            if (!layout.is_free(j)) continue;
            auto [lo, hi] = neighbours(j);
            const double delta = std::max(1e-3, 0.02 * T);
            const double a = std::max(lo, bps[j] - delta), b = std::min(hi, bps[j] + delta);
            if (!(b > a)) continue;
            auto g = [&](double tau) {
                std::vector<double> trial = bps;
                trial[j] = tau;
                return cost_of(trial, values);
            };
            auto [tau, f] = golden_min(g, a, b, bps[j], sol.cost);
            bps[j] = tau;
            sol.cost = f;
        }
    }
    if (opts.gradient_polish && std::isfinite(sol.cost)) {
        const double noise = 1e-9 * (1.0 + std::abs(sol.cost));
        for (int sweep = 0; sweep < 3; ++sweep) {
            double moved = 0.0;
            for (int j = 0; j < nb; ++j) {
                if (!layout.is_free(j)) continue;
                auto [lo, hi] = neighbours(j);
                if (!(hi > lo)) continue;
                auto G = [&](double tau) {
                    std::vector<double> trial = bps;
                    trial[j] = tau;
                    return switching_derivative(problem, trial, values, static_cast<std::size_t>(j), T, opts);
                };
                double candidate = bps[j];
                try {
                    const double g0 = G(bps[j]);
                    if (g0 == 0.0) continue;
                    // Walk downhill with doubling steps until dJ/dtau changes sign or a neighbour is hit.
                    const double dir = g0 > 0 ? -1.0 : 1.0;
                    double a = bps[j], ga = g0, step = std::max(1e-6, 1e-4 * (hi - lo));
                    double b = a;
                    double gb = g0;
                    bool bracketed = false;
                    while (true) {
                        b = std::clamp(a + dir * step, lo, hi);
                        gb = G(b);
                        if ((gb > 0) != (ga > 0) || gb == 0.0) {
                            bracketed = true;
                            break;
                        }
                        if (b == lo || b == hi) break;
                        a = b;
                        ga = gb;
                        step *= 2;
                    }
                    if (!bracketed) {
                        candidate = b;
                    } else {
                        double l = std::min(a, b), r = std::max(a, b);
                        double gl = l == a ? ga : gb;
                        for (int it = 0; it < 80 && r - l > 1e-13 * std::max(1.0, T); ++it) {
                            const double mid = 0.5 * (l + r);
                            const double gm = G(mid);
                            if ((gm > 0) == (gl > 0) && gm != 0.0) {
                                l = mid;
                                gl = gm;
                            } else {
                                r = mid;
                            }
                        }
                        candidate = 0.5 * (l + r);
                    }
                } catch (const BlowUpError&) {
                    continue;
                } catch (const IntegrationError&) {
                    continue;
                }
                std::vector<double> trial = bps;
                trial[j] = candidate;
                const double f = cost_of(trial, values);
                if (f <= sol.cost + noise) {
                    moved = std::max(moved, std::abs(candidate - bps[j]));
                    bps[j] = candidate;
                    sol.cost = std::min(sol.cost, f);
                    sol.cost = f;
                }
            }
            if (moved < 1e-12 * std::max(1.0, T)) break;
        }
    }

    sol.breakpoints = bps;
    sol.values = values;
    sol.control = assemble(bps, values, T, problem.u_star);
    sol.evaluations = evals;
    return sol;
}

BruteForceResult brute_force_oracle(const ProblemInstance& problem, const PatternTemplate& pattern, double T,
                                    double grid_step, const IntegrationOptions& iopts, double quad_tol) {
    pattern.validate(problem.control_set, T);
    if (pattern.free_breakpoint_count() != 1) throw std::invalid_argument("brute force needs exactly one free breakpoint");
    if (!(grid_step > 0.0)) throw std::invalid_argument("grid step must be positive");
    int free_index = -1;
    std::vector<double> bps(static_cast<std::size_t>(pattern.size() - 1), 0.0);
    for (int j = 0; j < pattern.size() - 1; ++j) {
        if (!pattern.fixed_breakpoints.empty() && pattern.fixed_breakpoints[j]) bps[j] = *pattern.fixed_breakpoints[j];
        else free_index = j;
    }
    const double lo = free_index == 0 ? 0.0 : bps[free_index - 1];
    const double hi = free_index == pattern.size() - 2 ? T : bps[free_index + 1];
    std::vector<Vec> values;
    for (const auto& p : pattern.pieces) values.push_back(p.value);
    BruteForceResult best;
    const auto count = static_cast<long>(std::floor(T / grid_step + 1e-9));
    for (long k = 0; k <= count + 1; ++k) {
        double tau = std::min(T, static_cast<double>(k) * grid_step);
        if (k == count + 1 && tau == static_cast<double>(count) * grid_step) break;
        if (tau < lo || tau > hi) continue;
        bps[free_index] = tau;
        const double c = pattern_cost(problem, bps, values, T, iopts, quad_tol);
        if (c < best.cost) best = {tau, c};
    }
    return best;
}

ControlSignal DiscretizedControl::to_signal(const Vec& tail) const {
    const int M = size();
    std::vector<double> bps(static_cast<std::size_t>(M + 1));
    for (int k = 0; k <= M; ++k) bps[k] = horizon * k / M;
    bps.back() = horizon;
    return ControlSignal(std::move(bps), cells, tail);
}

namespace {

// d l / d u by differences; one-sided at the faces of a box so samples stay in U.
Vec control_gradient(const RunningCost& cost, const ControlValueSet& U, double t, const Vec& x, const Vec& u) {
    Vec g(u.size());
    const double base = std::cbrt(std::numeric_limits<double>::epsilon());
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        const double h = base * (1.0 + std::abs(u(i)));
        Vec up = u, um = u;
        const bool can_up = !U.is_compact() || u(i) + h <= U.upper()(i);
        const bool can_down = !U.is_compact() || u(i) - h >= U.lower()(i);
        if (can_up && can_down) {
            up(i) += h;
            um(i) -= h;
            g(i) = (cost.ell2(t, x, up) - cost.ell2(t, x, um)) / (2 * h);
        } else if (can_up) {
            up(i) += h;
            g(i) = (cost.ell2(t, x, up) - cost.ell2(t, x, u)) / h;
        } else {
            um(i) -= h;
            g(i) = (cost.ell2(t, x, u) - cost.ell2(t, x, um)) / h;
        }
    }
    return g;
}

}  // namespace

std::vector<Vec> cell_gradients(const ProblemInstance& problem, const DiscretizedControl& control,
                                const IntegrationOptions& iopts, const CostateOptions& copts, double quad_tol,
                                double* cost) {
    const double T = control.horizon;
    const ControlSignal u = control.to_signal(problem.u_star);
    const Trajectory traj = integrate(problem.system, u, problem.x0, T, iopts);
    if (traj.blew_up()) throw BlowUpError("blow-up under the discretized control", traj.blow_up_time());
    if (cost) *cost = evaluate_cost(problem.cost, traj, u, T, quad_tol);
    const CostateTrajectory p = costate_integrate(problem, traj, u, T, copts);
    const int M = control.size();
    const int m = problem.system.control_dim;
    std::vector<Vec> grads(static_cast<std::size_t>(M), Vec::Zero(m));
    const auto& bps = u.breakpoints();
    for (int k = 0; k < M; ++k) {
        const Vec& v = control.cells[k];
        for (int i = 0; i < m; ++i) {
            auto density = [&](double t) {
                const Vec x = traj.at(t);
                const double dl = control_gradient(problem.cost, problem.control_set, t, x, v)(i);
                return dl + (problem.system.input_matrix(t, x).transpose() * p.at(t))(i);
            };
            grads[k](i) = integrate_adaptive(density, bps[k], bps[k + 1], quad_tol / M, problem.cost.breakpoints).value;
        }
    }
    return grads;
}

DirectSolution solve_direct(const ProblemInstance& problem, double T, int M, const DirectOptions& opts) {
    if (M < 1) throw std::invalid_argument("mesh needs at least one cell");
    if (!std::isfinite(T) || !(T > 0.0)) throw std::invalid_argument("horizon must be finite and positive");
    const auto& U = problem.control_set;
    const int m = problem.system.control_dim;
    DirectSolution sol;
    sol.control.horizon = T;
    if (opts.initial) {
        if (static_cast<int>(opts.initial->size()) != M) throw DimensionError("initial control has the wrong cell count");
        for (const auto& v : *opts.initial) sol.control.cells.push_back(U.project(v));
    } else {
        sol.control.cells.assign(static_cast<std::size_t>(M), U.midpoint());
    }
    const double dt = sol.control.cell_width();

    auto cost_of = [&](const DiscretizedControl& c) {
        const ControlSignal u = c.to_signal(problem.u_star);
        try {
            const Trajectory traj = integrate(problem.system, u, problem.x0, T, opts.integration);
            if (traj.blew_up()) return kInf;
            return evaluate_cost(problem.cost, traj, u, T, opts.quad_tol);
        } catch (const BlowUpError&) {
            return kInf;
        }
    };
    auto dot = [](const std::vector<Vec>& a, const std::vector<Vec>& b) {
        double s = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) s += a[k].dot(b[k]);
        return s;
    };
    auto residual_of = [&](const DiscretizedControl& c, const std::vector<Vec>& g) {
        double r = 0.0;
        for (int k = 0; k < M; ++k) {
            const Vec d = g[k] / dt;
            r = std::max(r, (U.project(c.cells[k] - d) - c.cells[k]).cwiseAbs().maxCoeff());
        }
        return r;
    };

    double J = kInf;
    std::vector<Vec> g = cell_gradients(problem, sol.control, opts.integration, opts.costate, opts.quad_tol, &J);
    if (!std::isfinite(J)) throw IntegrationError("initial control has infinite cost");
    double residual = residual_of(sol.control, g);
    double gmax = 0.0;
    for (const auto& v : g) gmax = std::max(gmax, (v / dt).cwiseAbs().maxCoeff());
    double range = 1.0;
    if (U.is_compact()) range = (U.upper() - U.lower()).maxCoeff();
    double step = gmax > 0 ? range / gmax : 1.0;
    sol.log.push_back({0, J, 0.0, residual});

    std::vector<Vec> prev_u, prev_d;
    int stagnant = 0;
    for (int it = 1; it <= opts.max_iters; ++it) {
        if (residual <= opts.gtol) {
            sol.converged = true;
            break;
        }
        std::vector<Vec> d(static_cast<std::size_t>(M));
        for (int k = 0; k < M; ++k) d[k] = g[k] / dt;
        if (!prev_u.empty()) {
            std::vector<Vec> su(static_cast<std::size_t>(M)), sd(static_cast<std::size_t>(M));
            for (int k = 0; k < M; ++k) {
                su[k] = sol.control.cells[k] - prev_u[k];
                sd[k] = d[k] - prev_d[k];
            }
            const double sy = dot(su, sd);
            if (sy > 0) step = std::clamp(dot(su, su) / sy, 1e-12, 1e12);
        }
        bool accepted = false;
        DiscretizedControl trial = sol.control;
        double Jt = kInf;
        double s = step;
        for (int bt = 0; bt < 60; ++bt) {
            double decrease = 0.0;
            for (int k = 0; k < M; ++k) {
                trial.cells[k] = U.project(sol.control.cells[k] - s * d[k]);
                decrease += g[k].dot(sol.control.cells[k] - trial.cells[k]);
            }
            Jt = cost_of(trial);
            if (Jt <= J - opts.armijo * decrease) {
                accepted = true;
                break;
            }
            s *= 0.5;
        }
        if (!accepted) {
            sol.line_search_failed = true;
            break;
        }
        prev_u = sol.control.cells;
        prev_d = d;
        const double drop = J - Jt;
        sol.control = trial;
        std::vector<Vec> g_new = cell_gradients(problem, sol.control, opts.integration, opts.costate, opts.quad_tol, &J);
        g = std::move(g_new);
        residual = residual_of(sol.control, g);
        sol.log.push_back({it, J, s, residual});
        stagnant = drop <= 1e-15 * (1.0 + std::abs(J)) ? stagnant + 1 : 0;
        if (stagnant >= 5) break;
    }
    sol.cost = J;
    sol.kkt_residual = residual;
    if (residual <= opts.gtol) sol.converged = true;
    (void)m;
    return sol;
}

}  // namespace patternlab
