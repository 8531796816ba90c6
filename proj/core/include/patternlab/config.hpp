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

#include "patternlab/dissipativity.hpp"
#include "patternlab/expr.hpp"
#include "patternlab/horizon.hpp"
#include "patternlab/problem.hpp"
#include "patternlab/solvers.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace patternlab {

/// Sectioned `key = value` document. `#` starts a comment line.
class ConfigDocument {
public:
    struct Entry {
        std::string value;
        int line = 0;
        int value_column = 0;
    };

    static ConfigDocument parse(const std::string& text);
    static ConfigDocument load(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;
    const Entry& get(const std::string& section, const std::string& key) const;
    std::optional<Entry> find(const std::string& section, const std::string& key) const;
    std::vector<std::string> keys(const std::string& section) const;
    bool has_section(const std::string& section) const;

private:
    std::map<std::string, std::map<std::string, Entry>> sections_;
    std::map<std::string, int> section_lines_;
};

/// A problem and its experiment settings, as read from a config document.
struct ProblemConfig {
    std::string name = "custom";
    int n = 1;
    int m = 1;
    std::vector<Expression> drift;                ///< a_i
    std::vector<std::vector<Expression>> input;  ///< b_ij
    Expression ell1;
    Expression ell2;
    bool sign_definite = true;
    bool regularity_asserted = false;
    std::vector<double> cost_breakpoints;
    std::vector<double> coefficient_breakpoints;
    std::optional<double> growth_alpha;
    std::optional<Expression> growth_gamma;  ///< in t
    double growth_gamma_l1 = 0.0;
    std::optional<Expression> dominator;  ///< m(t)
    std::optional<Box> dominator_box;
    ControlValueSet control_set;
    Vec x0;
    Vec u_star;
    std::optional<Expression> storage;
    std::optional<Box> storage_domain;
    std::optional<PatternTemplate> pattern;
    std::vector<double> horizons;
    unsigned long long seed = 0;
    double rtol = 1e-10;
    double atol = 1e-12;
    double quad_tol = 1e-10;
    double conv_tol = 1e-3;
    int max_iters = 600;

    ProblemInstance to_problem() const;
    std::optional<StorageCandidate> storage_candidate() const;
    SweepOptions sweep_options() const;
};

/// Reads the [problem], [control_set], [storage], [template], [sweep] and [tolerances] sections.
ProblemConfig read_problem_config(const ConfigDocument& doc);

/// Comma-separated decimals ("inf" allowed). Throws ParseError located at `line`/`column`.
std::vector<double> parse_number_list(const std::string& text, int line = 0, int column = 0);
double parse_number(const std::string& text, int line = 0, int column = 0);

/// Pieces separated by ',', components by ';' ("2, 1, 0" or "0;1, 1;1").
std::vector<Vec> parse_vector_list(const std::string& text, int line = 0, int column = 0);

}  // namespace patternlab
