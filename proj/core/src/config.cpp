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

#include "patternlab/config.hpp"

#include "patternlab/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace patternlab {

namespace {

std::string trim(const std::string& s, std::size_t* lead = nullptr) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    if (lead) *lead = a;
    return s.substr(a, b - a);
}

// Splits on `sep`, reporting each part's offset in `s`.
std::vector<std::pair<std::string, std::size_t>> split(const std::string& s, char sep) {
    std::vector<std::pair<std::string, std::size_t>> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            std::size_t lead = 0;
            std::string part = trim(s.substr(start, i - start), &lead);
            out.emplace_back(std::move(part), start + lead);
            start = i + 1;
        }
    }
    return out;
}

bool parse_bool(const ConfigDocument::Entry& e) {
    const std::string v = trim(e.value);
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ParseError("expected true or false", e.line, e.value_column);
}

}  // namespace

ConfigDocument ConfigDocument::parse(const std::string& text) {
    ConfigDocument doc;
    std::istringstream in(text);
    std::string raw, section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::size_t lead = 0;
        const std::string s = trim(raw, &lead);
        if (s.empty() || s[0] == '#') continue;
        if (s[0] == '[') {
            if (s.back() != ']') throw ParseError("unterminated section header", line, static_cast<int>(lead) + 1);
            section = trim(s.substr(1, s.size() - 2));
            if (section.empty()) throw ParseError("empty section name", line, static_cast<int>(lead) + 1);
            if (doc.section_lines_.count(section)) throw ParseError("duplicate section [" + section + "]", line, 1);
            doc.section_lines_[section] = line;
            doc.sections_[section];
            continue;
        }
        const auto eq = raw.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", line, static_cast<int>(lead) + 1);
        if (section.empty()) throw ParseError("key outside of a section", line, static_cast<int>(lead) + 1);
        const std::string key = trim(raw.substr(0, eq));
        if (key.empty()) throw ParseError("missing key", line, static_cast<int>(lead) + 1);
        std::size_t vlead = 0;
        const std::string value = trim(raw.substr(eq + 1), &vlead);
        auto& sec = doc.sections_[section];
        if (sec.count(key)) throw ParseError("duplicate key '" + key + "'", line, static_cast<int>(lead) + 1);
        sec[key] = Entry{value, line, static_cast<int>(eq + 1 + vlead) + 1};
    }
    return doc;
}

ConfigDocument ConfigDocument::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

bool ConfigDocument::has_section(const std::string& section) const { return sections_.count(section) > 0; }

bool ConfigDocument::has(const std::string& section, const std::string& key) const {
    const auto it = sections_.find(section);
    return it != sections_.end() && it->second.count(key);
}

std::optional<ConfigDocument::Entry> ConfigDocument::find(const std::string& section, const std::string& key) const {
    if (!has(section, key)) return std::nullopt;
    return sections_.at(section).at(key);
}

const ConfigDocument::Entry& ConfigDocument::get(const std::string& section, const std::string& key) const {
    if (!has(section, key)) {
        const auto it = section_lines_.find(section);
        throw ParseError("missing key '" + key + "' in [" + section + "]", it == section_lines_.end() ? 0 : it->second, 1);
    }
    return sections_.at(section).at(key);
}

std::vector<std::string> ConfigDocument::keys(const std::string& section) const {
    std::vector<std::string> out;
    const auto it = sections_.find(section);
    if (it == sections_.end()) return out;
    for (const auto& [k, v] : it->second) out.push_back(k);
    return out;
}

double parse_number(const std::string& text, int line, int column) {
    const std::string s = trim(text);
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
    double v = 0.0;
    const char* b = s.data();
    if (!s.empty() && s[0] == '+') ++b;
    const auto res = std::from_chars(b, s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ParseError("malformed number '" + s + "'", line, column);
    return v;
}

std::vector<double> parse_number_list(const std::string& text, int line, int column) {
    std::vector<double> out;
    if (trim(text).empty()) return out;
    for (const auto& [part, off] : split(text, ',')) out.push_back(parse_number(part, line, column + static_cast<int>(off)));
    return out;
}

std::vector<Vec> parse_vector_list(const std::string& text, int line, int column) {
    std::vector<Vec> out;
    if (trim(text).empty()) return out;
    for (const auto& [part, off] : split(text, ',')) {
        const auto comps = split(part, ';');
        Vec v(static_cast<Eigen::Index>(comps.size()));
        for (std::size_t i = 0; i < comps.size(); ++i)
            v(static_cast<Eigen::Index>(i)) = parse_number(comps[i].first, line, column + static_cast<int>(off + comps[i].second));
        out.push_back(std::move(v));
    }
    return out;
}

namespace {

Expression expr_entry(const ConfigDocument::Entry& e) { return Expression::parse(e.value, e.line, e.value_column); }

Vec vector_entry(const ConfigDocument::Entry& e, int dim, const char* what) {
    const auto v = parse_number_list(e.value, e.line, e.value_column);
    if (static_cast<int>(v.size()) != dim)
        throw ParseError(std::string(what) + " needs " + std::to_string(dim) + " entries", e.line, e.value_column);
    return Eigen::Map<const Vec>(v.data(), dim);
}

int int_entry(const ConfigDocument::Entry& e) {
    const double v = parse_number(e.value, e.line, e.value_column);
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e9) throw ParseError("expected a positive integer", e.line, e.value_column);
    return static_cast<int>(v);
}

}  // namespace

ProblemConfig read_problem_config(const ConfigDocument& doc) {
    ProblemConfig c;
    const std::string P = "problem";
    if (auto e = doc.find(P, "name")) c.name = e->value;
    c.n = int_entry(doc.get(P, "state_dim"));
    c.m = int_entry(doc.get(P, "control_dim"));
    for (int i = 0; i < c.n; ++i) {
        const auto key = "a" + std::to_string(i + 1);
        c.drift.push_back(doc.has(P, key) ? expr_entry(doc.get(P, key)) : Expression());
        c.drift.back().check_variables(c.n, c.m, true, false);
        std::vector<Expression> row;
        for (int j = 0; j < c.m; ++j) {
            const auto bkey = "b" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
            row.push_back(doc.has(P, bkey) ? expr_entry(doc.get(P, bkey)) : Expression());
            row.back().check_variables(c.n, c.m, true, false);
        }
        c.input.push_back(std::move(row));
    }
    if (auto e = doc.find(P, "ell1")) c.ell1 = expr_entry(*e);
    c.ell1.check_variables(c.n, c.m, true, false);
    if (auto e = doc.find(P, "ell2")) c.ell2 = expr_entry(*e);
    c.ell2.check_variables(c.n, c.m);
    if (auto e = doc.find(P, "sign_definite")) c.sign_definite = parse_bool(*e);
    if (auto e = doc.find(P, "regularity_asserted")) c.regularity_asserted = parse_bool(*e);
    if (auto e = doc.find(P, "cost_breakpoints")) c.cost_breakpoints = parse_number_list(e->value, e->line, e->value_column);
    if (auto e = doc.find(P, "coefficient_breakpoints"))
        c.coefficient_breakpoints = parse_number_list(e->value, e->line, e->value_column);
    if (auto e = doc.find(P, "growth_alpha")) c.growth_alpha = parse_number(e->value, e->line, e->value_column);
    if (auto e = doc.find(P, "growth_gamma")) {
        c.growth_gamma = expr_entry(*e);
        c.growth_gamma->check_variables(c.n, c.m, false, false);
    }
    if (auto e = doc.find(P, "growth_gamma_l1")) c.growth_gamma_l1 = parse_number(e->value, e->line, e->value_column);
    if (auto e = doc.find(P, "dominator")) {
        c.dominator = expr_entry(*e);
        c.dominator->check_variables(c.n, c.m, false, false);
        c.dominator_box = Box{vector_entry(doc.get(P, "dominator_lower"), c.n, "dominator_lower"),
                              vector_entry(doc.get(P, "dominator_upper"), c.n, "dominator_upper")};
    }
    c.x0 = vector_entry(doc.get(P, "x0"), c.n, "x0");

    const std::string U = "control_set";
    const auto& kind = doc.get(U, "kind");
    if (kind.value == "box") {
        const Vec lo = vector_entry(doc.get(U, "lower"), c.m, "lower");
        const Vec hi = vector_entry(doc.get(U, "upper"), c.m, "upper");
        try {
            c.control_set = ControlValueSet::box(lo, hi);
        } catch (const std::exception& ex) {
            throw ParseError(ex.what(), kind.line, kind.value_column);
        }
    } else if (kind.value == "full") {
        const auto& pe = doc.get(U, "exponent");
        try {
            c.control_set = ControlValueSet::full_space(c.m, parse_number(pe.value, pe.line, pe.value_column));
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& ex) {
            throw ParseError(ex.what(), pe.line, pe.value_column);
        }
    } else {
        throw ParseError("kind must be 'box' or 'full'", kind.line, kind.value_column);
    }
    c.u_star = Vec::Zero(c.m);
    if (auto e = doc.find(U, "u_star")) c.u_star = vector_entry(*e, c.m, "u_star");

    if (auto e = doc.find("storage", "S")) {
        c.storage = expr_entry(*e);
        c.storage->check_variables(c.n, c.m, true, false, false);
        if (doc.has("storage", "lower"))
            c.storage_domain = Box{vector_entry(doc.get("storage", "lower"), c.n, "lower"),
                                   vector_entry(doc.get("storage", "upper"), c.n, "upper")};
    }

    if (doc.has_section("template")) {
        const auto& ve = doc.get("template", "values");
        const auto values = parse_vector_list(ve.value, ve.line, ve.value_column);
        if (values.empty()) throw ParseError("template needs at least one piece", ve.line, ve.value_column);
        PatternTemplate t;
        for (const auto& v : values) {
            if (v.size() != c.m) throw ParseError("piece value has the wrong dimension", ve.line, ve.value_column);
            t.pieces.push_back({v, false});
        }
        if (auto e = doc.find("template", "free")) {
            for (double k : parse_number_list(e->value, e->line, e->value_column)) {
                if (k < 1 || k > static_cast<double>(t.pieces.size()) || k != std::floor(k))
                    throw ParseError("free piece index out of range", e->line, e->value_column);
                t.pieces[static_cast<std::size_t>(k) - 1].free = true;
            }
        }
        if (auto e = doc.find("template", "fixed_breakpoints")) {
            for (const auto& [part, off] : split(e->value, ',')) {
                if (part == "-") t.fixed_breakpoints.emplace_back(std::nullopt);
                else t.fixed_breakpoints.emplace_back(parse_number(part, e->line, e->value_column + static_cast<int>(off)));
            }
            if (static_cast<int>(t.fixed_breakpoints.size()) != t.size() - 1)
                throw ParseError("fixed_breakpoints needs one entry per interior breakpoint", e->line, e->value_column);
        }
        c.pattern = std::move(t);
    }

    if (auto e = doc.find("sweep", "horizons")) c.horizons = parse_number_list(e->value, e->line, e->value_column);
    if (auto e = doc.find("sweep", "seed")) {
        const double s = parse_number(e->value, e->line, e->value_column);
        if (!(s >= 0) || s != std::floor(s)) throw ParseError("seed must be a nonnegative integer", e->line, e->value_column);
        c.seed = static_cast<unsigned long long>(s);
    }

    const std::string T = "tolerances";
    auto num = [&](const char* key, double& out) {
        if (auto e = doc.find(T, key)) {
            out = parse_number(e->value, e->line, e->value_column);
            if (!(out > 0.0)) throw ParseError(std::string(key) + " must be positive", e->line, e->value_column);
        }
    };
    num("rtol", c.rtol);
    num("atol", c.atol);
    num("quad_tol", c.quad_tol);
    num("conv_tol", c.conv_tol);
    if (auto e = doc.find(T, "max_iters")) c.max_iters = int_entry(*e);
    return c;
}

ProblemInstance ProblemConfig::to_problem() const {
    ProblemInstance p;
    p.name = name;
    p.system.state_dim = n;
    p.system.control_dim = m;
    const Vec none = Vec::Zero(0);
    p.system.drift = [a = drift, none](double t, const Vec& x) {
        Vec out(static_cast<Eigen::Index>(a.size()));
        for (std::size_t i = 0; i < a.size(); ++i) out(static_cast<Eigen::Index>(i)) = a[i].evaluate({t, &x, &none});
        return out;
    };
    p.system.input_matrix = [b = input, none, n = n, m = m](double t, const Vec& x) {
        Mat out(n, m);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < m; ++j) out(i, j) = b[i][j].evaluate({t, &x, &none});
        }
        return out;
    };
    p.system.coefficient_breakpoints = coefficient_breakpoints;
    p.cost.ell1 = [e = ell1, none](double t, const Vec& x) { return e.evaluate({t, &x, &none}); };
    p.cost.ell2 = [e = ell2](double t, const Vec& x, const Vec& u) { return e.evaluate({t, &x, &u}); };
    p.cost.sign_definite = sign_definite;
    p.cost.breakpoints = cost_breakpoints;
    if (growth_alpha) {
        GrowthBound g;
        g.alpha = *growth_alpha;
        if (growth_gamma) g.gamma = [e = *growth_gamma](double t) { return e.evaluate({t, nullptr, nullptr}); };
        g.gamma_l1 = growth_gamma_l1;
        p.cost.growth = g;
    }
    if (dominator) {
        p.cost.dominator = Dominator{*dominator_box, [e = *dominator](double t) { return e.evaluate({t, nullptr, nullptr}); }};
    }
    p.x0 = x0;
    p.control_set = control_set;
    p.u_star = u_star;
    p.regularity_asserted = regularity_asserted;
    p.validate();
    return p;
}

std::optional<StorageCandidate> ProblemConfig::storage_candidate() const {
    if (!storage) return std::nullopt;
    StorageCandidate s;
    s.name = storage->print();
    s.S = [e = *storage](const Vec& x) { return e.evaluate({0.0, &x, nullptr}); };
    return s;
}

SweepOptions ProblemConfig::sweep_options() const {
    SweepOptions o;
    o.conv_tol = conv_tol;
    o.solver.seed = seed;
    o.solver.quad_tol = quad_tol;
    o.solver.max_iters = max_iters;
    o.solver.integration.rtol = rtol;
    o.solver.integration.atol = atol;
    return o;
}

}  // namespace patternlab
