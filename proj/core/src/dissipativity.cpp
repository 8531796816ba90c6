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

#include "patternlab/dissipativity.hpp"

#include "patternlab/errors.hpp"
#include "patternlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace patternlab {

Vec StorageCandidate::grad(const Vec& x) const {
    if (gradient) return (*gradient)(x);
    Vec g(x.size());
    const double base = std::cbrt(std::numeric_limits<double>::epsilon());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double h = base * (1.0 + std::abs(x(j)));
        Vec xp = x, xm = x;
        xp(j) += h;
        xm(j) -= h;
        g(j) = (S(xp) - S(xm)) / (2 * h);
    }
    return g;
}

std::vector<double> dissipation_time_grid(double t_max, const std::vector<double>& breakpoints, int points) {
    std::vector<double> ts = t_max > 0 ? linspace(0.0, t_max, std::max(points, 2)) : std::vector<double>{0.0};
    for (double b : breakpoints) {
        const double d = 1e-9 * std::max(1.0, std::abs(b));
        for (double t : {b - d, b + d}) {
            if (t >= 0.0 && t <= t_max) ts.push_back(t);
        }
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

std::vector<Vec> control_grid(const ControlValueSet& U, int points_per_axis, double full_space_radius) {
    if (U.is_compact()) return box_grid(Box{U.lower(), U.upper()}, points_per_axis);
    const Vec r = Vec::Constant(U.dim(), full_space_radius);
    return box_grid(Box{-r, r}, points_per_axis);
}

namespace {

// Coordinate-wise local grids that shrink every round, then a golden-section pass per coordinate.
// Maximizes g; the starting point is never lost.
struct Refiner {
    std::function<double(const Vec&)> g;
    Vec lo, hi;
    int points = 65;

    Vec run(Vec z, Vec h, int rounds) const {
        double best = g(z);
        const Eigen::Index d = z.size();
        for (int r = 0; r < rounds; ++r) {
            for (Eigen::Index i = 0; i < d; ++i) {
                if (!(hi(i) > lo(i)) || !(h(i) > 0)) continue;
                const double a = std::max(lo(i), z(i) - h(i)), b = std::min(hi(i), z(i) + h(i));
                for (double v : linspace(a, b, points)) {
                    Vec w = z;
                    w(i) = v;
                    const double gv = g(w);
                    if (gv > best) {
                        best = gv;
                        z = w;
                    }
                }
            }
            h *= 2.0 / (points - 1);
        }
        for (int sweep = 0; sweep < 2; ++sweep) {
            for (Eigen::Index i = 0; i < d; ++i) {
                if (!(hi(i) > lo(i)) || !(h(i) > 0)) continue;
                double a = std::max(lo(i), z(i) - h(i)), b = std::min(hi(i), z(i) + h(i));
                const double invphi = (std::sqrt(5.0) - 1) / 2;
                auto at = [&](double v) {
                    Vec w = z;
                    w(i) = v;
                    return g(w);
                };
                double c = b - invphi * (b - a), e = a + invphi * (b - a);
                double gc = at(c), ge = at(e);
                for (int it = 0; it < 200 && b - a > 1e-13 * std::max(1.0, std::abs(z(i))); ++it) {
                    if (gc >= ge) {
                        b = e;
                        e = c;
                        ge = gc;
                        c = b - invphi * (b - a);
                        gc = at(c);
                    } else {
                        a = c;
                        c = e;
                        gc = ge;
                        e = a + invphi * (b - a);
                        ge = at(e);
                    }
                }
                const double v = gc >= ge ? c : e;
                const double gv = std::max(gc, ge);
                if (gv > best) {
                    best = gv;
                    z(i) = v;
                }
            }
        }
        return z;
    }
};

double grid_spacing(const std::vector<double>& values) {
    std::vector<double> v = values;
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    double gap = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) gap = std::max(gap, v[i] - v[i - 1]);
    return gap;
}

}  // namespace

DifferentialReport check_differential(const StorageCertificate& cert, const ControlAffineSystem& system,
                                      const ControlValueSet& U, const std::vector<double>& t_grid,
                                      const std::vector<Vec>& x_grid, const std::vector<Vec>& u_grid,
                                      const DifferentialOptions& opts) {
    if (t_grid.empty() || x_grid.empty() || u_grid.empty()) throw std::invalid_argument("differential check needs nonempty grids");
    const int n = system.state_dim, m = system.control_dim;
    DifferentialReport rep;

    auto power = [&](double t, const Vec& x, const Vec& u) { return cert.storage.grad(x).dot(system.rhs(t, x, u)); };

    // Grid pass.
    double best_ratio = -kInf;
    std::size_t bi = 0, bj = 0, bk = 0, ri = 0, rj = 0, rk = 0;
    bool have_ratio = false;
    for (std::size_t j = 0; j < x_grid.size(); ++j) {
        const Vec& x = x_grid[j];
        const double s = cert.storage(x);
        if (!std::isfinite(s)) throw IntegrationError("storage function is not finite on the grid");
        if (s < 0.0 && rep.nonnegative) {
            rep.nonnegative = false;
            rep.negative_witness = x;
        }
        const Vec gS = cert.storage.grad(x);
        if (!gS.allFinite()) throw IntegrationError("storage gradient is not finite on the grid");
        if (cert.storage.gradient) {
            StorageCandidate fd{cert.storage.name, cert.storage.S, std::nullopt};
            const double mismatch = (fd.grad(x) - gS).norm() / (1.0 + gS.norm());
            rep.gradient_mismatch = std::max(rep.gradient_mismatch, mismatch);
        }
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            const double t = t_grid[i];
            for (std::size_t k = 0; k < u_grid.size(); ++k) {
                const Vec f = system.rhs(t, x, u_grid[k]);
                if (!f.allFinite()) throw IntegrationError("dynamics are not finite on the grid");
                const double r = cert.supply(t, x, u_grid[k]);
                if (r == kInf) continue;
                const double p = gS.dot(f);
                const double margin = r - p;
                if (margin < rep.grid_worst_margin) {
                    rep.grid_worst_margin = margin;
                    bi = i, bj = j, bk = k;
                }
                if (r > 0.0 && std::isfinite(r) && p / r > best_ratio) {
                    best_ratio = p / r;
                    ri = i, rj = j, rk = k;
                    have_ratio = true;
                }
            }
        }
    }
    rep.gradient_consistent = rep.gradient_mismatch <= 1e-5;

    // Search box and spacings for refinement over z = (t, x, u).
    const Eigen::Index d = 1 + n + m;
    Vec lo(d), hi(d), h(d);
    lo(0) = *std::min_element(t_grid.begin(), t_grid.end());
    hi(0) = *std::max_element(t_grid.begin(), t_grid.end());
    h(0) = grid_spacing(t_grid);
    for (int a = 0; a < n; ++a) {
        std::vector<double> c;
        for (const auto& x : x_grid) c.push_back(x(a));
        lo(1 + a) = *std::min_element(c.begin(), c.end());
        hi(1 + a) = *std::max_element(c.begin(), c.end());
        h(1 + a) = grid_spacing(c);
    }
    for (int a = 0; a < m; ++a) {
        std::vector<double> c;
        for (const auto& u : u_grid) c.push_back(u(a));
        lo(1 + n + a) = *std::min_element(c.begin(), c.end());
        hi(1 + n + a) = *std::max_element(c.begin(), c.end());
        if (U.is_compact()) {
            lo(1 + n + a) = std::max(lo(1 + n + a), U.lower()(a));
            hi(1 + n + a) = std::min(hi(1 + n + a), U.upper()(a));
        }
        h(1 + n + a) = grid_spacing(c);
    }
    auto pack = [&](double t, const Vec& x, const Vec& u) {
        Vec z(d);
        z(0) = t;
        z.segment(1, n) = x;
        z.segment(1 + n, m) = u;
        return z;
    };
    auto unpack = [&](const Vec& z) { return SamplePoint{z(0), z.segment(1, n), z.segment(1 + n, m)}; };

    auto neg_margin = [&](const Vec& z) {
        const SamplePoint p = unpack(z);
        const double r = cert.supply(p.t, p.x, p.u);
        if (r == kInf) return -kInf;
        const double v = power(p.t, p.x, p.u) - r;
        return std::isfinite(v) ? v : -kInf;
    };
    auto ratio = [&](const Vec& z) {
        const SamplePoint p = unpack(z);
        const double r = cert.supply(p.t, p.x, p.u);
        if (!(r > 0.0) || !std::isfinite(r)) return -kInf;
        const double v = power(p.t, p.x, p.u) / r;
        return std::isfinite(v) ? v : -kInf;
    };

    if (std::isfinite(rep.grid_worst_margin)) {
        Refiner ref{neg_margin, lo, hi};
        const Vec z = ref.run(pack(t_grid[bi], x_grid[bj], u_grid[bk]), h, opts.refinement_rounds);
        rep.witness = unpack(z);
        rep.worst_margin = std::min(rep.grid_worst_margin, -neg_margin(z));
    } else {
        rep.worst_margin = rep.grid_worst_margin;
    }
    if (have_ratio) {
        Refiner ref{ratio, lo, hi};
        const Vec z = ref.run(pack(t_grid[ri], x_grid[rj], u_grid[rk]), h, opts.refinement_rounds);
        rep.ratio_witness = unpack(z);
        rep.worst_ratio = std::max(best_ratio, ratio(z));
    }
    rep.ok = rep.nonnegative && rep.worst_margin >= -opts.tolerance;

    std::ostringstream spec;
    spec << "t:" << t_grid.size() << "[" << format_number(lo(0)) << "," << format_number(hi(0)) << "]";
    spec << " x:" << x_grid.size() << " u:" << u_grid.size() << " rounds:" << opts.refinement_rounds;
    rep.grid_spec = spec.str();
    return rep;
}

DifferentialReport check_differential(const StorageCertificate& cert, const ControlAffineSystem& system,
                                      const ControlValueSet& U, double t_max, const DifferentialOptions& opts) {
    const auto ts = dissipation_time_grid(t_max, system.coefficient_breakpoints);
    const auto xs = box_grid(cert.domain, opts.points_per_axis);
    const auto us = control_grid(U, opts.points_per_axis);
    return check_differential(cert, system, U, ts, xs, us, opts);
}

IntegralReport check_integral(const StorageCertificate& cert, const ControlAffineSystem& system,
                              const std::vector<Vec>& x0_samples, const std::vector<ControlSignal>& controls, double T,
                              double tol, const IntegrationOptions& iopts, double quad_tol) {
    IntegralReport rep;
    for (std::size_t a = 0; a < x0_samples.size(); ++a) {
        const Vec& x0 = x0_samples[a];
        const double s0 = cert.storage(x0);
        for (std::size_t b = 0; b < controls.size(); ++b) {
            const ControlSignal& u = controls[b];
            const Trajectory traj = integrate(system, u, x0, T, iopts);
            double window = T;
            if (traj.blew_up()) {
                rep.truncated_by_blow_up = true;
                const auto& ts = traj.times();
                window = ts.size() >= 2 ? ts[ts.size() - 2] : 0.0;
            }
            std::vector<double> nodes = linspace(0.0, window, 257);
            for (double t : traj.times()) {
                if (t < window) nodes.push_back(t);
            }
            std::sort(nodes.begin(), nodes.end());
            nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

            std::vector<double> splits = u.breakpoints();
            splits.insert(splits.end(), system.coefficient_breakpoints.begin(), system.coefficient_breakpoints.end());
            auto supply = [&](double t) { return cert.supply(t, traj.at(t), u.evaluate(t)); };
            auto cumulative = [&](double from, double to, double base) {
                return base + integrate_adaptive(supply, from, to, quad_tol, splits).value;
            };
            auto violation = [&](double t, double cum) { return cert.storage(traj.at(t)) - s0 - cum; };

            double cum = 0.0;
            bool violated = false;
            for (std::size_t k = 1; k < nodes.size(); ++k) {
                const double next = cumulative(nodes[k - 1], nodes[k], cum);
                const double v = violation(nodes[k], next);
                if (v > rep.worst_violation) {
                    rep.worst_violation = v;
                    rep.witness_x0 = a;
                    rep.witness_control = b;
                    rep.witness_time = nodes[k];
                }
                if (!violated && v > tol) {
                    violated = true;
                    double lo = nodes[k - 1], hi = nodes[k];
                    for (int it = 0; it < 60 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
                        const double mid = 0.5 * (lo + hi);
                        if (violation(mid, cumulative(nodes[k - 1], mid, cum)) > tol) hi = mid;
                        else lo = mid;
                    }
                    rep.first_violation_time = std::min(rep.first_violation_time, hi);
                }
                cum = next;
            }
        }
    }
    rep.ok = !(rep.worst_violation > tol);
    return rep;
}

std::string to_string(CoercivityVerdict v) {
    switch (v) {
        case CoercivityVerdict::CoerciveEvidence: return "coercive-evidence";
        case CoercivityVerdict::NonCoerciveEvidence: return "non-coercive-evidence";
        case CoercivityVerdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

CoercivityReport check_coercivity(const StorageCandidate& storage, int dim, const std::vector<double>& radii,
                                  int directions, unsigned long long seed) {
    if (radii.empty()) throw std::invalid_argument("coercivity check needs radii");
    for (std::size_t i = 1; i < radii.size(); ++i) {
        if (!(radii[i] > radii[i - 1])) throw std::invalid_argument("coercivity radii must increase");
    }
    std::vector<Vec> dirs;
    if (dim == 1) {
        dirs = {Vec::Constant(1, 1.0), Vec::Constant(1, -1.0)};
    } else if (dim == 2) {
        for (int k = 0; k < directions; ++k) {
            const double a = 2 * M_PI * k / directions;
            Vec v(2);
            v << std::cos(a), std::sin(a);
            dirs.push_back(v);
        }
    } else {
        for (int i = 0; i < dim; ++i) {
            dirs.push_back(Vec::Unit(dim, i));
            dirs.push_back(-Vec::Unit(dim, i));
        }
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> nd;
        while (static_cast<int>(dirs.size()) < directions) {
            Vec v(dim);
            for (int i = 0; i < dim; ++i) v(i) = nd(rng);
            if (v.norm() > 1e-12) dirs.push_back(v / v.norm());
        }
    }
    CoercivityReport rep;
    for (double R : radii) {
        double lowest = kInf;
        for (const auto& d : dirs) lowest = std::min(lowest, storage(R * d));
        rep.growth_table.emplace_back(R, lowest);
    }
    const auto& g = rep.growth_table;
    if (g.size() < 2) return rep;
    bool increasing = true;
    for (std::size_t i = 1; i < g.size(); ++i) increasing = increasing && g[i].second > g[i - 1].second;
    const double last_step = g.back().second - g[g.size() - 2].second;
    const double threshold = 1e-3 * std::max(1.0, std::abs(g.back().second));
    if (increasing && last_step >= threshold) rep.verdict = CoercivityVerdict::CoerciveEvidence;
    else if (last_step < threshold) rep.verdict = CoercivityVerdict::NonCoerciveEvidence;
    return rep;
}

double sublevel_bound(const StorageCandidate& storage, const Vec& x0, const BoundConstants& k) {
    double M = storage(x0) + k.cost_cap + k.gamma_l1;
    if (std::isfinite(k.exponent)) {
        if (!(k.alpha > 0.0)) throw std::invalid_argument("growth constant must be positive");
        const double D = (k.cost_cap + k.gamma_l1) / std::min(1.0, k.alpha);
        M += k.alpha * D;
    }
    return M;
}

BoundednessReport uniform_boundedness_probe(const StorageCandidate& storage, const ControlAffineSystem& system,
                                            const Vec& x0, const std::vector<ControlSignal>& controls,
                                            double horizon, const BoundConstants& k, double tol,
                                            const IntegrationOptions& iopts) {
    BoundednessReport rep;
    rep.bound = sublevel_bound(storage, x0, k);
    for (std::size_t i = 0; i < controls.size(); ++i) {
        const Trajectory traj = integrate(system, controls[i], x0, horizon, iopts);
        double ssup = -kInf, xsup = 0.0;
        std::vector<double> ts = linspace(0.0, traj.end(), 513);
        ts.insert(ts.end(), traj.times().begin(), traj.times().end());
        for (double t : ts) {
            const Vec x = traj.at(t);
            ssup = std::max(ssup, storage(x));
            xsup = std::max(xsup, x.norm());
        }
        if (traj.blew_up()) {
            ssup = std::max(ssup, storage(traj.final_state()));
            xsup = kInf;
        }
        rep.per_sample_state_sup.push_back(xsup);
        rep.per_sample_storage_sup.push_back(ssup);
        if (ssup > rep.storage_sup) rep.worst_sample = i;
        rep.storage_sup = std::max(rep.storage_sup, ssup);
        rep.state_sup = std::max(rep.state_sup, xsup);
        if (traj.blew_up() || ssup > rep.bound + tol) rep.ok = false;
    }
    return rep;
}

}  // namespace patternlab
