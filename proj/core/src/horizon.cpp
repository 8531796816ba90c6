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

#include "patternlab/horizon.hpp"

#include "patternlab/costs.hpp"
#include "patternlab/errors.hpp"
#include "patternlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

namespace patternlab {

std::string to_string(LimitFlag f) {
    switch (f) {
        case LimitFlag::FiniteLimit: return "finite-limit";
        case LimitFlag::DivergesToInfinity: return "diverges-to-inf";
        case LimitFlag::Undetermined: return "undetermined";
    }
    return "undetermined";
}

std::string to_string(CostLimit c) {
    switch (c) {
        case CostLimit::Converges: return "converges";
        case CostLimit::DivergesPlus: return "diverges-to-+inf";
        case CostLimit::DivergesMinus: return "diverges-to--inf";
        case CostLimit::Undetermined: return "undetermined";
    }
    return "undetermined";
}

std::string to_string(PreservationVerdict v) {
    switch (v) {
        case PreservationVerdict::PredictedAndConfirmed: return "predicted-and-confirmed";
        case PreservationVerdict::PredictedUnconfirmed: return "predicted-unconfirmed";
        case PreservationVerdict::NotPredictedCounterexampleFound: return "not-predicted-counterexample-found";
        case PreservationVerdict::NotPredictedNoCounterexample: return "not-predicted-no-counterexample";
    }
    return "not-predicted-no-counterexample";
}

bool PatternResult::all_determined() const {
    return std::none_of(flags.begin(), flags.end(), [](LimitFlag f) { return f == LimitFlag::Undetermined; });
}

void PatternResult::write_csv(std::ostream& os) const {
    std::size_t nb = 0, nv = 0, m = 0;
    for (const auto& e : entries) {
        nb = std::max(nb, e.breakpoints.size());
        nv = std::max(nv, e.values.size());
        for (const auto& v : e.values) m = std::max(m, static_cast<std::size_t>(v.size()));
    }
    os << "T";
    for (std::size_t j = 0; j < nb; ++j) os << ",tau_" << j + 1;
    for (std::size_t j = 0; j < nv; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            os << ",u_" << j + 1;
            if (m > 1) os << '_' << i + 1;
        }
    }
    os << ",cost,status\n";
    for (const auto& e : entries) {
        os << format_number(e.horizon);
        for (std::size_t j = 0; j < nb; ++j) os << ',' << (j < e.breakpoints.size() ? format_number(e.breakpoints[j]) : "");
        for (std::size_t j = 0; j < nv; ++j) {
            for (std::size_t i = 0; i < m; ++i) {
                os << ',';
                if (j < e.values.size() && static_cast<Eigen::Index>(i) < e.values[j].size()) os << format_number(e.values[j](i));
            }
        }
        os << ',' << format_number(e.cost) << ',' << (!e.ok ? "failed" : e.converged ? "ok" : "unconverged") << "\n";
    }
}

void classify_limits(PatternResult& result, double conv_tol, double ratio_floor) {
    std::vector<const HorizonEntry*> ok;
    for (const auto& e : result.entries) {
        if (e.ok) ok.push_back(&e);
    }
    std::size_t nb = 0;
    for (const auto* e : ok) nb = std::max(nb, e->breakpoints.size());
    result.flags.assign(nb, LimitFlag::Undetermined);
    result.limit_breakpoints.assign(nb, std::numeric_limits<double>::quiet_NaN());
    result.limit_values.clear();
    if (ok.empty()) return;
    result.limit_values = ok.back()->values;
    const std::size_t K = ok.size();
    if (K < 2) return;
    const std::size_t tail = std::max<std::size_t>(1, (K - 1) / 2);
    for (std::size_t j = 0; j < nb; ++j) {
        bool cauchy = true, increasing = true, offset_cauchy = true, ratio_ok = true;
        for (std::size_t k = K - tail; k < K; ++k) {
            const double a = ok[k - 1]->breakpoints[j], b = ok[k]->breakpoints[j];
            const double Ta = ok[k - 1]->horizon, Tb = ok[k]->horizon;
            if (!(std::abs(b - a) < conv_tol)) cauchy = false;
            if (!(b > a)) increasing = false;
            if (!(std::abs((Tb - b) - (Ta - a)) < conv_tol)) offset_cauchy = false;
            if (!(a / Ta >= ratio_floor && b / Tb >= ratio_floor)) ratio_ok = false;
        }
        if (cauchy) {
            result.flags[j] = LimitFlag::FiniteLimit;
            result.limit_breakpoints[j] = ok.back()->breakpoints[j];
        } else if (increasing && (offset_cauchy || ratio_ok)) {
            result.flags[j] = LimitFlag::DivergesToInfinity;
            result.limit_breakpoints[j] = kInf;
        }
    }
}

PatternResult horizon_sweep(const ProblemInstance& problem, const PatternTemplate& pattern,
                            const std::vector<double>& horizons, const SweepOptions& opts) {
    if (horizons.size() < 2) throw std::invalid_argument("a sweep needs at least two horizons");
    for (std::size_t k = 1; k < horizons.size(); ++k) {
        if (!(horizons[k] > horizons[k - 1])) throw std::invalid_argument("horizons must be strictly increasing");
    }
    PatternResult result;
    std::vector<const HorizonEntry*> history;
    for (double T : horizons) {
        HorizonEntry e;
        e.horizon = T;
        SolverOptions so = opts.solver;
        if (opts.warm_start && !history.empty()) {
            // Affine extrapolation from the last two solved horizons, else a shift by the horizon step.
            const HorizonEntry& last = *history.back();
            std::vector<double> seed = last.breakpoints;
            const double dT = T - last.horizon;
            for (std::size_t j = 0; j < seed.size(); ++j) {
                if (history.size() >= 2) {
                    const HorizonEntry& prev = *history[history.size() - 2];
                    const double slope = (last.breakpoints[j] - prev.breakpoints[j]) / (last.horizon - prev.horizon);
                    seed[j] += slope * dT;
                } else {
                    seed[j] += dT;
                }
                seed[j] = std::clamp(seed[j], 0.0, T);
            }
            so.warm_start = seed;
        }
        try {
            const SwitchingSolution s = solve_switching_times(problem, pattern, T, so);
            e.breakpoints = s.breakpoints;
            e.values = s.values;
            e.cost = s.cost;
            e.converged = s.converged;
            e.ok = std::isfinite(s.cost);
            if (!e.ok) e.error = "every candidate had infinite cost";
        } catch (const std::exception& ex) {
            e.error = ex.what();
        }
        result.entries.push_back(std::move(e));
        history.clear();
        for (const auto& r : result.entries) {
            if (r.ok) history.push_back(&r);
        }
    }
    classify_limits(result, opts.conv_tol, opts.ratio_floor);
    return result;
}

ControlSignal limit_control(const PatternResult& result, const Vec& tail) {
    if (result.limit_values.empty()) throw InapplicableError("the sweep has no solved horizon");
    if (!result.all_determined()) throw InapplicableError("undetermined breakpoint limits; add larger horizons");
    std::vector<double> starts{0.0};
    starts.insert(starts.end(), result.limit_breakpoints.begin(), result.limit_breakpoints.end());
    starts.push_back(kInf);
    std::vector<double> bps{0.0};
    std::vector<Vec> pieces;
    for (std::size_t j = 0; j < result.limit_values.size(); ++j) {
        const double a = starts[j], b = starts[j + 1];
        if (!(b > a)) continue;
        pieces.push_back(result.limit_values[j]);
        bps.push_back(b);
    }
    return ControlSignal(std::move(bps), std::move(pieces), tail);
}

double InfiniteCostEstimate::value() const {
    switch (limit) {
        case CostLimit::Converges: return 0.5 * (lower + upper);
        case CostLimit::DivergesPlus: return kInf;
        case CostLimit::DivergesMinus: return -kInf;
        case CostLimit::Undetermined: break;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

namespace {

double dominator_tail(const Dominator& d, double T) {
    double total = 0.0;
    double a = T, b = std::max(2.0 * T, T + 1.0);
    for (int k = 0; k < 40; ++k) {
        const double piece = integrate_adaptive(d.m, a, b, 1e-14, {}).value;
        total += piece;
        if (std::abs(piece) <= 1e-14 * (1.0 + std::abs(total))) return total;
        a = b;
        b *= 2.0;
    }
    return kInf;
}

}  // namespace

InfiniteCostEstimate infinite_cost_estimate(const ProblemInstance& problem, const ControlSignal& u,
                                            const std::vector<double>& truncations, double quad_tol) {
    if (truncations.empty()) throw std::invalid_argument("no truncation horizons");
    for (std::size_t k = 1; k < truncations.size(); ++k) {
        if (!(truncations[k] > truncations[k - 1])) throw std::invalid_argument("truncations must be increasing");
    }
    InfiniteCostEstimate est;
    const double Tmax = truncations.back();
    const ControlSignal v = u.horizon() > Tmax ? u.truncated(Tmax, u.evaluate(Tmax)) : u;
    IntegrationOptions io;
    io.escape_radius = 1e100;
    const Trajectory traj = integrate(problem.system, v, problem.x0, Tmax, io);
    const bool nonneg = problem.cost.sign_definite;
    double J = 0.0, prev_T = 0.0;
    std::vector<double> inc;
    bool broke = false;
    for (double T : truncations) {
        if (broke || (traj.blew_up() && T > traj.blow_up_time())) {
            broke = true;
            est.truncations.emplace_back(T, nonneg ? kInf : std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        const double d = evaluate_cost(problem.cost, traj, v, prev_T, T, quad_tol * (1.0 + std::abs(J)));
        inc.push_back(d);
        J += d;
        prev_T = T;
        est.truncations.emplace_back(T, J);
    }
    if (broke) {
        est.limit = nonneg ? CostLimit::DivergesPlus : CostLimit::Undetermined;
        return est;
    }
    if (!std::isfinite(J)) {
        est.limit = J > 0 ? CostLimit::DivergesPlus : CostLimit::DivergesMinus;
        return est;
    }
    const double scale = 1.0 + std::abs(J);
    const double last = inc.back();
    double tail = kInf;
    if (std::abs(last) <= 1e-8 * scale) {
        tail = std::abs(last);
    } else if (inc.size() >= 3) {
        const double r = std::abs(last) / std::abs(inc[inc.size() - 2]);
        if (r < 0.75 && (last > 0) == (inc[inc.size() - 2] > 0)) tail = std::abs(last) * r / (1.0 - r);
    }
    if (!std::isfinite(tail)) {
        est.limit = inc.size() >= 3 ? (last > 0 ? CostLimit::DivergesPlus : CostLimit::DivergesMinus)
                                    : CostLimit::Undetermined;
        return est;
    }
    est.limit = CostLimit::Converges;
    if (problem.cost.dominator) tail += dominator_tail(*problem.cost.dominator, Tmax);
    est.tail_bound = tail;
    if (nonneg) {
        est.extrapolated = true;
        est.lower = J;
        est.upper = J + tail;
    } else {
        est.lower = est.upper = J;
    }
    return est;
}

bool HypothesisChecklist::all() const {
    return dissipativity && storage_coercive && decomposition && domination && growth_or_compact && regularity;
}

void HypothesisChecklist::write(std::ostream& os) const {
    auto b = [](bool v) { return v ? "pass" : "fail"; };
    os << "dissipativity=" << b(dissipativity) << "\n"
       << "storage_coercive=" << b(storage_coercive) << "\n"
       << "decomposition=" << b(decomposition) << "\n"
       << "domination=" << b(domination) << "\n"
       << "growth_or_compact=" << b(growth_or_compact) << "\n"
       << "regularity_asserted=" << b(regularity) << "\n"
       << "predicted=" << (all() ? "true" : "false") << "\n";
    for (const auto& n : notes) os << "note=" << n << "\n";
}

HypothesisChecklist compute_checklist(const ProblemInstance& problem, const std::optional<StorageCandidate>& storage,
                                      const ChecklistOptions& opts) {
    HypothesisChecklist c;
    const auto& cost = problem.cost;
    const auto t_grid = dissipation_time_grid(opts.t_max, cost.breakpoints);
    Box box = opts.state_box;
    if (box.dim() != problem.system.state_dim) {
        box = Box{Vec::Constant(problem.system.state_dim, opts.state_box.lower(0)),
                  Vec::Constant(problem.system.state_dim, opts.state_box.upper(0))};
    }
    const auto x_grid = box_grid(box, problem.system.state_dim == 1 ? 41 : 9);
    const auto u_grid = control_grid(problem.control_set, problem.control_set.dim() == 1 ? 21 : 5);

    if (storage) {
        StorageCertificate cert;
        cert.storage = *storage;
        cert.supply = [&cost](double t, const Vec& x, const Vec& u) { return cost(t, x, u); };
        cert.domain = box;
        const auto rep = check_differential(cert, problem.system, problem.control_set, opts.t_max, opts.differential);
        c.dissipativity = rep.ok && rep.nonnegative;
        if (!rep.ok) c.notes.push_back("differential dissipation margin " + format_number(rep.worst_margin));
        const auto coer = check_coercivity(*storage, problem.system.state_dim, cert.coercivity_radii);
        c.storage_coercive = coer.verdict == CoercivityVerdict::CoerciveEvidence;
        if (!c.storage_coercive) c.notes.push_back("storage coercivity " + to_string(coer.verdict));
    } else {
        c.notes.push_back("no storage candidate");
    }

    if (cost.sign_definite) {
        const auto conv = check_convexity_in_u(cost, problem.control_set, t_grid, x_grid, 200, 7);
        c.decomposition = conv.ok;
        if (!conv.ok) c.notes.push_back("cost not convex in u");
    } else {
        c.notes.push_back("cost is not sign definite");
    }

    if (cost.dominator) {
        const auto dom = check_reference_cost_domination(cost, problem.u_star, t_grid);
        c.domination = dom.ok;
        if (!dom.ok) c.notes.push_back("reference cost not dominated");
    } else {
        c.notes.push_back("no dominator declared");
    }

    if (problem.control_set.is_compact()) {
        c.growth_or_compact = true;
    } else if (cost.growth) {
        const auto g = check_growth_condition(cost, problem.control_set.exponent(), t_grid, x_grid, u_grid);
        c.growth_or_compact = g.ok;
        if (!g.ok) c.notes.push_back("growth bound violated");
    } else {
        c.notes.push_back("no growth bound declared for unbounded controls");
    }

    c.regularity = problem.regularity_asserted;
    if (!c.regularity) c.notes.push_back("coefficient regularity not asserted");
    return c;
}

std::vector<Challenger> default_challengers(const ProblemInstance& problem) {
    std::vector<Challenger> out;
    auto add = [&](const Vec& v) {
        for (const auto& c : out) {
            if (c.control.tail() == v) return;
        }
        std::string name = "u=";
        for (Eigen::Index i = 0; i < v.size(); ++i) name += (i ? ";" : "") + format_number(v(i));
        out.push_back({name, ControlSignal({0.0, kInf}, {v}, v)});
    };
    add(problem.u_star);
    if (problem.control_set.is_compact()) {
        for (const auto& v : problem.control_set.vertices()) add(v);
    }
    return out;
}

namespace {

// b strictly better than a, in extended reals with a relative tolerance.
bool beats(double b, double a) {
    if (std::isnan(a) || std::isnan(b)) return false;
    if (std::isinf(a) && std::isinf(b)) return b < a;
    if (std::isinf(a) || std::isinf(b)) return b < a;
    return b < a - 1e-6 * (1.0 + std::abs(a));
}

}  // namespace

PreservationReport pattern_preservation_report(const ProblemInstance& problem, const PatternTemplate& pattern,
                                               const std::vector<double>& horizons,
                                               const HypothesisChecklist& checklist,
                                               std::vector<Challenger> challengers, const SweepOptions& opts,
                                               const std::vector<double>& truncations) {
    PreservationReport rep;
    rep.checklist = checklist;
    rep.sweep = horizon_sweep(problem, pattern, horizons, opts);
    if (challengers.empty()) challengers = default_challengers(problem);
    bool confirmed = false;
    if (rep.sweep.all_determined() && !rep.sweep.limit_values.empty()) {
        rep.limit = limit_control(rep.sweep, problem.u_star);
        rep.limit_cost = infinite_cost_estimate(problem, *rep.limit, truncations, opts.solver.quad_tol);
        confirmed = rep.limit_cost.limit != CostLimit::Undetermined;
        for (auto& c : challengers) {
            auto est = infinite_cost_estimate(problem, c.control, truncations, opts.solver.quad_tol);
            if (beats(est.value(), rep.limit_cost.value())) {
                confirmed = false;
                if (!rep.counterexample) rep.counterexample = c.name;
            }
            rep.challengers.emplace_back(std::move(c), std::move(est));
        }
    }
    if (checklist.all()) {
        rep.verdict = confirmed ? PreservationVerdict::PredictedAndConfirmed : PreservationVerdict::PredictedUnconfirmed;
    } else {
        rep.verdict = rep.counterexample ? PreservationVerdict::NotPredictedCounterexampleFound
                                         : PreservationVerdict::NotPredictedNoCounterexample;
    }
    return rep;
}

EquicoercivityReport equicoercivity_probe(const ProblemInstance& problem, const std::vector<double>& horizons,
                                          double cost_cap,
                                          const std::function<std::vector<ControlSignal>(double)>& samples,
                                          double rel_tol, const IntegrationOptions& iopts) {
    EquicoercivityReport rep;
    std::map<double, double> per_horizon;
    for (double T : horizons) {
        const auto controls = samples(T);
        for (std::size_t i = 0; i < controls.size(); ++i) {
            EquicoercivityReport::Sample s;
            s.horizon = T;
            s.index = i;
            const Trajectory traj = integrate(problem.system, controls[i], problem.x0, T, iopts);
            const double end = traj.blew_up() ? traj.end() : T;
            s.cost = evaluate_cost(problem.cost, traj, controls[i], 0.0, end, 1e-10);
            s.feasible = s.cost <= cost_cap;
            if (traj.blew_up()) {
                s.state_sup = kInf;
            } else {
                for (const auto& x : traj.states()) s.state_sup = std::max(s.state_sup, x.norm());
            }
            if (s.feasible) {
                auto& m = per_horizon[T];
                m = std::max(m, s.state_sup);
            }
            rep.samples.push_back(s);
        }
    }
    double running = 0.0;
    std::size_t k = 0;
    for (const auto& [T, sup] : per_horizon) {
        if (!std::isfinite(sup)) rep.bounded = false;
        if (++k == per_horizon.size() && k > 1 && sup > running * (1.0 + rel_tol) + rel_tol) rep.bounded = false;
        running = std::max(running, sup);
    }
    rep.bound = running;
    return rep;
}

void CrossoverReport::write_csv(std::ostream& os) const {
    os << "T,cost_a,cost_b,cost_direct\n";
    for (const auto& r : rows) {
        os << format_number(r.horizon) << ',' << format_number(r.cost_a) << ',' << format_number(r.cost_b) << ','
           << (r.cost_direct ? format_number(*r.cost_direct) : "") << "\n";
    }
}

CrossoverReport compare_templates(const ProblemInstance& problem, const PatternTemplate& a, const PatternTemplate& b,
                                  const std::vector<double>& horizons, const CrossoverOptions& opts) {
    CrossoverReport rep;
    for (double T : horizons) {
        CrossoverRow row;
        row.horizon = T;
        row.cost_a = solve_switching_times(problem, a, T, opts.solver).cost;
        row.cost_b = solve_switching_times(problem, b, T, opts.solver).cost;
        if (opts.cells_per_unit > 0) {
            const int M = std::max(1, static_cast<int>(std::ceil(opts.cells_per_unit * T)));
            row.cost_direct = solve_direct(problem, T, M, opts.direct).cost;
        }
        rep.rows.push_back(row);
    }
    for (std::size_t k = rep.rows.size(); k-- > 0;) {
        const auto& r = rep.rows[k];
        if (!(r.cost_a < r.cost_b - opts.tie_tol * std::max(1.0, std::abs(r.cost_b)))) break;
        rep.crossover = rep.rows[k].horizon;
    }
    return rep;
}

}  // namespace patternlab
