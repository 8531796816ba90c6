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

#include "cli.hpp"

#include "CLI11.hpp"

#include "patternlab/builtin.hpp"
#include "patternlab/config.hpp"
#include "patternlab/dissipativity.hpp"
#include "patternlab/errors.hpp"
#include "patternlab/horizon.hpp"
#include "patternlab/pmp.hpp"
#include "patternlab/regulator.hpp"
#include "patternlab/solvers.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace patternlab::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";

struct Resolved {
    std::string name;
    ProblemInstance problem;
    std::optional<StorageCandidate> storage;
    Box domain{Vec::Constant(1, -100.0), Vec::Constant(1, 100.0)};
    std::optional<PatternTemplate> pattern;
    std::vector<double> horizons;
    SweepOptions sweep;
    std::optional<QRProblem> regulator;
};

class Summary {
public:
    template <class T>
    void add(const std::string& key, const T& value) {
        std::ostringstream os;
        if constexpr (std::is_same_v<T, double>) os << format_number(value);
        else if constexpr (std::is_same_v<T, bool>) os << (value ? "true" : "false");
        else os << value;
        rows_.emplace_back(key, os.str());
    }
    std::string str() const {
        std::string s;
        for (const auto& [k, v] : rows_) s += k + "=" + v + "\n";
        return s;
    }

private:
    std::vector<std::pair<std::string, std::string>> rows_;
};

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i]);
    return s;
}

std::string join(const Vec& v) {
    std::string s;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ";" : "") + format_number(v(i));
    return s;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << content;
}

std::string control_csv(const ControlSignal& u) {
    std::ostringstream os;
    os << "t";
    for (int i = 0; i < u.dim(); ++i) os << ",u" << i + 1;
    os << "\n";
    const auto& b = u.breakpoints();
    for (std::size_t j = 0; j < u.pieces().size(); ++j) {
        if (!(b[j + 1] > b[j])) continue;
        for (double t : {b[j], b[j + 1]}) {
            os << format_number(t);
            for (int i = 0; i < u.dim(); ++i) os << ',' << format_number(u.pieces()[j](i));
            os << "\n";
        }
    }
    return os.str();
}

std::string trajectory_csv(const Trajectory& traj) {
    std::ostringstream os;
    traj.write_csv(os, (traj.end() - traj.start()) / 1000.0);
    return os.str();
}

std::string costate_csv(const CostateTrajectory& p, double T) {
    std::ostringstream os;
    const auto n = p.at(0.0).size();
    os << "t";
    for (Eigen::Index i = 0; i < n; ++i) os << ",p" << i + 1;
    os << "\n";
    for (double t : linspace(0.0, T, 1001)) {
        const Vec v = p.at(t);
        os << format_number(t);
        for (Eigen::Index i = 0; i < n; ++i) os << ',' << format_number(v(i));
        os << "\n";
    }
    return os.str();
}

std::string switching_csv(const SwitchingFunction& phi) {
    std::ostringstream os;
    const auto m = phi.values.empty() ? 0 : phi.values.front().size();
    os << "t";
    for (Eigen::Index i = 0; i < m; ++i) os << ",phi" << i + 1;
    os << "\n";
    for (std::size_t k = 0; k < phi.times.size(); ++k) {
        os << format_number(phi.times[k]);
        for (Eigen::Index i = 0; i < m; ++i) os << ',' << format_number(phi.values[k](i));
        os << "\n";
    }
    return os.str();
}

std::string log_csv(const std::vector<IterationRecord>& log) {
    std::ostringstream os;
    write_log_csv(os, log);
    return os.str();
}

std::string metadata(const ExperimentSpec& spec, const std::string& command_line) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << "version=" << kVersion << "\n"
       << "timestamp=" << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ") << "\n"
       << "command=" << spec.command << "\n"
       << "invocation=" << command_line << "\n"
       << "seed=" << spec.seed << "\n";
    return os.str();
}

QRProblem regulator_from_config(const ConfigDocument& doc, const ProblemConfig& cfg) {
    auto matrix = [&](const char* key, int rows, int cols) {
        const auto& e = doc.get("regulator", key);
        const auto r = parse_vector_list(e.value, e.line, e.value_column);
        if (static_cast<int>(r.size()) != rows) throw ParseError(std::string(key) + " has the wrong row count", e.line, e.value_column);
        Mat M(rows, cols);
        for (int i = 0; i < rows; ++i) {
            if (r[i].size() != cols) throw ParseError(std::string(key) + " has the wrong column count", e.line, e.value_column);
            M.row(i) = r[i].transpose();
        }
        return M;
    };
    const int n = cfg.n, m = cfg.m;
    const Mat R = matrix("R", m, m);
    if (doc.has("regulator", "A")) {
        QRProblem qr = QRProblem::linear_instance(matrix("A", n, n), matrix("B", n, m), matrix("Q", n, n), R, cfg.x0);
        qr.name = cfg.name;
        return qr;
    }
    const ProblemInstance p = cfg.to_problem();
    QRProblem qr;
    qr.name = cfg.name;
    qr.system = p.system;
    qr.R = R;
    qr.ell1 = p.cost.ell1;
    qr.x0 = cfg.x0;
    if (auto e = doc.find("regulator", "growth_constant")) qr.growth_constant = parse_number(e->value, e->line, e->value_column);
    return qr;
}

Resolved resolve(const ExperimentSpec& spec) {
    Resolved r;
    if (!spec.config.empty()) {
        const ConfigDocument doc = ConfigDocument::load(spec.config);
        const ProblemConfig cfg = read_problem_config(doc);
        r.name = cfg.name;
        r.problem = cfg.to_problem();
        r.storage = cfg.storage_candidate();
        if (cfg.storage_domain) r.domain = *cfg.storage_domain;
        r.pattern = cfg.pattern;
        r.horizons = cfg.horizons;
        r.sweep = cfg.sweep_options();
        if (doc.has_section("regulator")) r.regulator = regulator_from_config(doc, cfg);
    } else if (spec.problem == "cubic") {
        r.name = "cubic";
        r.regulator = builtin::cubic_regulator();
        r.problem = r.regulator->to_problem();
        r.storage = builtin::half_square_storage();
        r.horizons = {2, 5, 10, 20};
    } else {
        if (spec.problem.empty()) throw std::invalid_argument("give --problem or --config");
        r.name = spec.problem;
        r.problem = builtin::by_name(spec.problem);
        const auto d = builtin::defaults(spec.problem);
        r.storage = d.storage;
        r.domain = d.storage_domain;
        r.pattern = d.pattern;
        r.horizons = d.horizons;
        if (spec.problem == "lqr") r.regulator = builtin::scalar_lqr_regulator();
    }
    const int n = r.problem.system.state_dim, m = r.problem.system.control_dim;
    if (r.domain.dim() != n) r.domain = Box{Vec::Constant(n, r.domain.lower(0)), Vec::Constant(n, r.domain.upper(0))};
    if (!spec.horizons.empty()) r.horizons = parse_number_list(spec.horizons, 0, 0);
    if (!spec.pattern.empty()) {
        PatternTemplate t;
        for (const auto& v : parse_vector_list(spec.pattern, 0, 0)) {
            if (v.size() != m) throw DimensionError("template values need " + std::to_string(m) + " components");
            t.pieces.push_back({v, false});
        }
        r.pattern = t;
    }
    if (!spec.storage.empty()) {
        const Expression e = Expression::parse(spec.storage);
        e.check_variables(n, m, true, false, false);
        r.storage = StorageCandidate{e.print(), [e](const Vec& x) { return e.evaluate({0.0, &x, nullptr}); }, std::nullopt};
    }
    if (spec.seed_set) r.sweep.solver.seed = spec.seed;
    if (spec.tol > 0.0) {
        r.sweep.solver.integration.rtol = spec.tol;
        r.sweep.solver.integration.atol = spec.tol * 1e-2;
        r.sweep.solver.quad_tol = spec.tol;
    }
    if (spec.max_iters > 0) r.sweep.solver.max_iters = spec.max_iters;
    return r;
}

double first_horizon(const Resolved& r, double fallback) { return r.horizons.empty() ? fallback : r.horizons.front(); }

DirectOptions direct_options(const Resolved& r, const ExperimentSpec& spec) {
    DirectOptions d;
    d.integration = r.sweep.solver.integration;
    if (spec.tol > 0.0) d.quad_tol = spec.tol;
    if (spec.max_iters > 0) d.max_iters = spec.max_iters;
    return d;
}

int certify(const ExperimentSpec& spec, const Resolved& r, const fs::path& out) {
    if (!r.storage) throw std::invalid_argument("certify needs a storage candidate (--storage)");
    StorageCertificate cert;
    cert.storage = *r.storage;
    const auto& cost = r.problem.cost;
    cert.supply = [&cost](double t, const Vec& x, const Vec& u) { return cost(t, x, u); };
    cert.domain = r.domain;
    const double t_max = r.horizons.empty() ? 10.0 : *std::max_element(r.horizons.begin(), r.horizons.end());
    const auto diff = check_differential(cert, r.problem.system, r.problem.control_set, t_max);
    const auto coer = check_coercivity(cert.storage, r.problem.system.state_dim, cert.coercivity_radii);
    ChecklistOptions co;
    co.state_box = r.domain;
    co.t_max = t_max;
    const auto checklist = compute_checklist(r.problem, r.storage, co);

    Summary s;
    s.add("command", std::string("certify"));
    s.add("problem", r.name);
    s.add("storage", cert.storage.name);
    s.add("ok", diff.ok);
    s.add("worst_margin", diff.worst_margin);
    s.add("witness_t", diff.witness.t);
    s.add("witness_x", join(diff.witness.x));
    s.add("witness_u", join(diff.witness.u));
    s.add("worst_ratio", diff.worst_ratio);
    if (diff.ratio_witness.x.size() > 0) s.add("ratio_witness_x", join(diff.ratio_witness.x));
    s.add("storage_nonnegative", diff.nonnegative);
    s.add("grid", diff.grid_spec);
    s.add("coercivity", to_string(coer.verdict));
    std::ostringstream ck;
    checklist.write(ck);
    write_file(out / "summary.txt", s.str() + ck.str());
    std::ostringstream table;
    table << "radius,min_storage\n";
    for (const auto& [R, v] : coer.growth_table) table << format_number(R) << ',' << format_number(v) << "\n";
    write_file(out / "coercivity.csv", table.str());
    std::cout << "ok=" << (diff.ok ? "true" : "false") << " coercivity=" << to_string(coer.verdict) << "\n";
    (void)spec;
    return diff.ok ? kOk : kVerdictFailed;
}

int solve(const ExperimentSpec& spec, const Resolved& r, const fs::path& out) {
    const double T = first_horizon(r, 10.0);
    Summary s;
    s.add("command", std::string("solve"));
    s.add("problem", r.name);
    s.add("horizon", T);
    if (!r.pattern && spec.mesh <= 0) throw std::invalid_argument("solve needs --template or --mesh");
    if (r.pattern) {
        const SwitchingSolution sol = solve_switching_times(r.problem, *r.pattern, T, r.sweep.solver);
        s.add("breakpoints", join(sol.breakpoints));
        std::string vals;
        for (std::size_t j = 0; j < sol.values.size(); ++j) vals += (j ? "," : "") + join(sol.values[j]);
        s.add("values", vals);
        s.add("cost", sol.cost);
        s.add("converged", sol.converged);
        s.add("evaluations", sol.evaluations);
        write_file(out / "control.csv", control_csv(sol.control));
        write_file(out / "log.csv", log_csv(sol.log));
        const Trajectory traj = integrate(r.problem.system, sol.control, r.problem.x0, T, r.sweep.solver.integration);
        write_file(out / "trajectory.csv", trajectory_csv(traj));
        try {
            const ExtremalReport ext = verify_extremal(r.problem, sol.control, T);
            s.add("extremal", std::string(ext.consistent ? "consistent" : "inconsistent"));
            s.add("max_sign_violation", ext.max_sign_violation);
            s.add("max_singular_residual", ext.max_singular_residual);
            write_file(out / "switching_function.csv", switching_csv(ext.phi));
        } catch (const InapplicableError& e) {
            s.add("extremal", std::string("inapplicable"));
        }
    }
    if (spec.mesh > 0) {
        const DirectSolution d = solve_direct(r.problem, T, spec.mesh, direct_options(r, spec));
        s.add("direct_cells", spec.mesh);
        s.add("direct_cost", d.cost);
        s.add("direct_kkt_residual", d.kkt_residual);
        s.add("direct_converged", d.converged);
        s.add("direct_line_search_failed", d.line_search_failed);
        write_file(out / "direct_control.csv", control_csv(d.control.to_signal(r.problem.u_star)));
        write_file(out / "direct_log.csv", log_csv(d.log));
    }
    write_file(out / "summary.txt", s.str());
    std::cout << s.str();
    return kOk;
}

void write_preservation(const PreservationReport& rep, const fs::path& out, Summary& s) {
    std::ostringstream sweep;
    rep.sweep.write_csv(sweep);
    write_file(out / "sweep.csv", sweep.str());
    s.add("verdict", to_string(rep.verdict));
    for (std::size_t j = 0; j < rep.sweep.flags.size(); ++j) {
        s.add("flag_tau_" + std::to_string(j + 1), to_string(rep.sweep.flags[j]));
        s.add("limit_tau_" + std::to_string(j + 1), rep.sweep.limit_breakpoints[j]);
    }
    if (rep.limit) s.add("limit_control", to_record(*rep.limit));
    s.add("limit_cost", to_string(rep.limit_cost.limit));
    s.add("limit_cost_value", rep.limit_cost.value());
    if (rep.counterexample) s.add("counterexample", *rep.counterexample);
    std::ostringstream ch;
    ch << "name,limit,value";
    std::vector<double> truncs;
    if (!rep.challengers.empty())
        for (const auto& [T, J] : rep.challengers.front().second.truncations) truncs.push_back(T);
    for (double T : truncs) ch << ",J_" << format_number(T);
    ch << "\n";
    auto row = [&](const std::string& name, const InfiniteCostEstimate& e) {
        ch << name << ',' << to_string(e.limit) << ',' << format_number(e.value());
        for (const auto& [T, J] : e.truncations) ch << ',' << format_number(J);
        ch << "\n";
    };
    if (rep.limit) row("limit", rep.limit_cost);
    for (const auto& [c, e] : rep.challengers) row(c.name, e);
    write_file(out / "challengers.csv", ch.str());
    std::ostringstream ck;
    rep.checklist.write(ck);
    write_file(out / "checklist.txt", ck.str());
}

int sweep(const ExperimentSpec& spec, const Resolved& r, const fs::path& out) {
    if (!r.pattern) throw std::invalid_argument("sweep needs a template (--template)");
    ChecklistOptions co;
    co.state_box = r.domain;
    co.t_max = r.horizons.empty() ? 10.0 : r.horizons.back();
    const auto checklist = compute_checklist(r.problem, r.storage, co);
    const auto rep = pattern_preservation_report(r.problem, *r.pattern, r.horizons, checklist, {}, r.sweep);
    Summary s;
    s.add("command", std::string("sweep"));
    s.add("problem", r.name);
    s.add("horizons", join(r.horizons));
    write_preservation(rep, out, s);
    write_file(out / "summary.txt", s.str());
    std::cout << s.str();
    (void)spec;
    return rep.verdict == PreservationVerdict::PredictedAndConfirmed ? kOk : kVerdictFailed;
}

int qr(const ExperimentSpec& spec, const Resolved& r, const fs::path& out) {
    if (!r.regulator) throw std::invalid_argument("qr needs a regulator instance (lqr, cubic, or a [regulator] section)");
    const QRProblem& q = *r.regulator;
    q.validate(Box{Vec::Constant(q.system.state_dim, -1.0), Vec::Constant(q.system.state_dim, 1.0)});
    QRExperimentOptions o;
    o.direct = direct_options(r, spec);
    if (spec.mesh > 0) o.cells_per_unit = spec.mesh;
    const auto rep = qr_horizon_experiment(q, r.horizons, o);
    std::ostringstream csv;
    rep.write_csv(csv);
    write_file(out / "qr.csv", csv.str());
    Summary s;
    s.add("command", std::string("qr"));
    s.add("problem", r.name);
    s.add("horizons", join(r.horizons));
    s.add("verdict", to_string(rep.verdict));
    s.add("window", rep.window);
    s.add("note", rep.note);
    if (q.linear) {
        const auto& L = *q.linear;
        try {
            const auto P = riccati_algebraic(L.A, L.B, L.Q, q.R);
            std::string ps;
            for (Eigen::Index i = 0; i < P.P.size(); ++i) ps += (i ? ";" : "") + format_number(P.P.data()[i]);
            s.add("riccati_algebraic", ps);
            s.add("riccati_residual", P.residual);
        } catch (const IntegrationError& e) {
            s.add("riccati_algebraic", std::string("none: ") + e.what());
        }
        const RiccatiPath path = riccati_finite(L.A, L.B, L.Q, q.R, r.horizons.back());
        std::ostringstream rp;
        path.write_csv(rp);
        write_file(out / "riccati.csv", rp.str());
    }
    write_file(out / "summary.txt", s.str());
    std::cout << s.str();
    return rep.verdict == QRAlternative::Undetermined ? kVerdictFailed : kOk;
}

void figure1(const fs::path& out, Summary& s) {
    const ProblemInstance p = builtin::discounted_singular();
    const double T = 10.0;
    const SwitchingSolution sol = solve_switching_times(p, PatternTemplate::from_values({2, 1, 0}), T);
    const ExtremalReport ext = verify_extremal(p, sol.control, T);
    const Trajectory traj = integrate(p.system, sol.control, p.x0, T, ExtremalOptions{}.integration);
    const CostateTrajectory cs = costate_integrate(p, traj, sol.control, T, ExtremalOptions{}.costate);
    write_file(out / "figure1_control.csv", control_csv(sol.control));
    write_file(out / "figure1_state.csv", trajectory_csv(traj));
    write_file(out / "figure1_costate.csv", costate_csv(cs, T));
    write_file(out / "figure1_switching.csv", switching_csv(ext.phi));
    s.add("figure1_tau_1", sol.breakpoints[0]);
    s.add("figure1_tau_2", sol.breakpoints[1]);
    s.add("figure1_cost", sol.cost);
    s.add("figure1_extremal", std::string(ext.consistent ? "consistent" : "inconsistent"));
    s.add("figure1_max_singular_residual", ext.max_singular_residual);
}

void sweep_target(const std::string& name, const std::vector<Challenger>& challengers, const fs::path& out,
                  Summary& s) {
    const ProblemInstance p = builtin::by_name(name);
    const auto d = builtin::defaults(name);
    const auto checklist = compute_checklist(p, d.storage);
    const auto rep = pattern_preservation_report(p, *d.pattern, d.horizons, checklist, challengers);
    Summary sub;
    write_preservation(rep, out, sub);
    write_file(out / "summary.txt", sub.str());
    s.add(name + "_verdict", to_string(rep.verdict));
}

void crossover_target(const fs::path& out, Summary& s) {
    const ProblemInstance p = builtin::discounted_singular();
    CrossoverOptions o;
    o.cells_per_unit = 40;
    o.direct.max_iters = 500;
    const auto rep = compare_templates(p, PatternTemplate::from_values({2, 1, 0}), PatternTemplate::from_values({2, 0}),
                                       {1, 2, 3, 4, 5, 6, 8, 10, 15, 20}, o);
    std::ostringstream csv;
    rep.write_csv(csv);
    write_file(out / "crossover.csv", csv.str());
    s.add("ex42_crossover", rep.crossover ? format_number(*rep.crossover) : std::string("none"));
}

void counterexample_target(const fs::path& out, Summary& s) {
    const ProblemInstance p = builtin::finite_escape();
    std::ostringstream csv;
    csv << "T_k,u_k,x_at_1,cost\n";
    for (double Tk : {10.0, 100.0, 1000.0}) {
        const ControlSignal u = ControlSignal::scalar({0.0, 1.0, 2.0}, {1.0 - 1.0 / Tk, 0.0});
        const Trajectory traj = integrate(p.system, u, p.x0, 2.0);
        csv << format_number(Tk) << ',' << format_number(1.0 - 1.0 / Tk) << ',' << format_number(traj.at(1.0)(0)) << ','
            << format_number(evaluate_cost(p.cost, traj, u, 2.0, 1e-12)) << "\n";
    }
    write_file(out / "counterexample.csv", csv.str());
    const Trajectory full = integrate(p.system, ControlSignal::scalar({0.0, 1.0, 2.0}, {1.0, 0.0}), p.x0, 2.0);
    s.add("counterexample_blow_up", full.blew_up());
    s.add("counterexample_blow_up_time", full.blow_up_time());
    StorageCertificate cert;
    cert.storage = builtin::bump_storage();
    cert.supply = [&p](double t, const Vec& x, const Vec& u) { return p.cost(t, x, u); };
    cert.domain = Box{Vec::Constant(1, -10.0), Vec::Constant(1, 10.0)};
    const auto diff = check_differential(cert, p.system, p.control_set, 2.0);
    s.add("counterexample_certificate_ok", diff.ok);
    s.add("counterexample_worst_ratio", diff.worst_ratio);
    s.add("counterexample_ratio_x", diff.ratio_witness.x(0));
    s.add("counterexample_coercivity",
          to_string(check_coercivity(cert.storage, 1, cert.coercivity_radii).verdict));
}

void lqr_target(const fs::path& out, Summary& s) {
    const QRProblem q = builtin::scalar_lqr_regulator();
    const auto& L = *q.linear;
    const RiccatiPath path = riccati_finite(L.A, L.B, L.Q, q.R, 5.0);
    std::ostringstream rp;
    path.write_csv(rp);
    write_file(out / "riccati.csv", rp.str());
    s.add("lqr_riccati_P0_T5", path.at(0.0)(0, 0));
    s.add("lqr_riccati_algebraic", riccati_algebraic(L.A, L.B, L.Q, q.R).P(0, 0));
    const auto rep = qr_horizon_experiment(q, {2, 5, 10, 20});
    std::ostringstream csv;
    rep.write_csv(csv);
    write_file(out / "qr.csv", csv.str());
    s.add("lqr_verdict", to_string(rep.verdict));
}

int reproduce(const ExperimentSpec& spec, const fs::path& out) {
    static const std::vector<std::string> targets{"figure1", "ex41", "ex42", "ex24", "counterexample", "lqr"};
    std::vector<std::string> run;
    if (spec.target == "all") run = targets;
    else if (std::find(targets.begin(), targets.end(), spec.target) != targets.end()) run = {spec.target};
    else throw std::invalid_argument("unknown target '" + spec.target + "'; expected all or one of figure1, ex41, ex42, ex24, counterexample, lqr");
    Summary s;
    s.add("command", std::string("reproduce-paper"));
    s.add("target", spec.target);
    for (const auto& t : run) {
        const fs::path dir = run.size() > 1 ? out / t : out;
        fs::create_directories(dir);
        if (t == "figure1") figure1(dir, s);
        if (t == "ex41")
            sweep_target("ex41", {{"u=0", ControlSignal::constant(0.0, kInf, 0.0)}, {"u=1", ControlSignal::constant(1.0, kInf, 0.0)}}, dir, s);
        if (t == "ex42") crossover_target(dir, s);
        if (t == "ex24") sweep_target("ex24", {}, dir, s);
        if (t == "counterexample") counterexample_target(dir, s);
        if (t == "lqr") lqr_target(dir, s);
    }
    write_file(out / "summary.txt", s.str());
    std::cout << s.str();
    return kOk;
}

}  // namespace

int run(const ExperimentSpec& spec, const std::string& command_line) {
    try {
        const fs::path out(spec.out);
        fs::create_directories(out);
        int code = kError;
        if (spec.command == "reproduce-paper") {
            code = reproduce(spec, out);
        } else {
            const Resolved r = resolve(spec);
            if (spec.command == "certify") code = certify(spec, r, out);
            else if (spec.command == "solve") code = solve(spec, r, out);
            else if (spec.command == "sweep") code = sweep(spec, r, out);
            else if (spec.command == "qr") code = qr(spec, r, out);
            else throw std::invalid_argument("unknown command '" + spec.command + "'");
        }
        write_file(out / "metadata.txt", metadata(spec, command_line));
        return code;
    } catch (const ParseError& e) {
        std::cerr << "error: " << (spec.config.empty() ? "" : spec.config + ":") << e.what() << "\n";
    } catch (const EvalError& e) {
        std::cerr << "error: evaluation failed at " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return kError;
}

int main(int argc, char** argv) {
    CLI::App app{"patternlab: horizon sweeps, dissipativity certificates and optimal-control solvers"};
    app.require_subcommand(1);
    ExperimentSpec spec;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--problem", spec.problem, "built-in problem: ex24, counterexample, ex41, ex42, lqr, cubic");
        sub->add_option("--config", spec.config, "problem config file");
        sub->add_option("--out", spec.out, "output directory")->capture_default_str();
        sub->add_option("--horizons", spec.horizons, "comma-separated horizons");
        sub->add_option("--template", spec.pattern, "piece values, e.g. 2,1,0");
        sub->add_option("--storage", spec.storage, "storage expression in x1..xn");
        sub->add_option_function<unsigned long long>("--seed", [&](unsigned long long s) {
            spec.seed = s;
            spec.seed_set = true;
        }, "multistart seed");
        sub->add_option("--tol", spec.tol, "integration rtol and quadrature tolerance");
        sub->add_option("--mesh", spec.mesh, "direct-solver cells (qr: cells per unit time)");
        sub->add_option("--max-iters", spec.max_iters, "iteration cap for the solvers");
    };
    for (const char* name : {"certify", "solve", "sweep", "qr"}) add_common(app.add_subcommand(name));
    auto* rep = app.add_subcommand("reproduce-paper", "regenerate every worked example");
    rep->add_option("--target", spec.target, "all, figure1, ex41, ex42, ex24, counterexample or lqr")->capture_default_str();
    rep->add_option("--out", spec.out, "output directory")->capture_default_str();
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kError;
    }
    spec.command = app.get_subcommands().front()->get_name();
    std::string line;
    for (int i = 0; i < argc; ++i) line += (i ? " " : "") + std::string(argv[i]);
    return run(spec, line);
}

}  // namespace patternlab::cli
