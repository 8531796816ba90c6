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
#include "patternlab/problem.hpp"
#include "patternlab/regulator.hpp"
#include "patternlab/solvers.hpp"

#include <optional>

#include <string>
#include <vector>

namespace patternlab::builtin {

/// x' = u x, l = (u - 1) x, U = [0, 1], x0 = 1. Sign-indefinite cost.
ProblemInstance bang_bang_growth();
/// x' = 1_[0,1](t) u x^2, l = e^{-t} |u|, U = [0, 1], x0 = 1.
ProblemInstance finite_escape();
/// x' = (1 - u) x, l = 4|u| + |x|, U = [0, 2], x0 = 1.
ProblemInstance linear_cost_growth();
/// x' = (1 - u) x, l = (|u|/3 + |x|) e^{-2t}, U = [0, 2], x0 = 1. Singular value u = 1 at x = 2/3.
ProblemInstance discounted_singular();
/// x' = u, l = x^2 + u^2, U = R, p = 2, x0 = 1.
ProblemInstance scalar_lqr();

StorageCandidate log_storage();         ///< ln(|x| + 1)
StorageCandidate bump_storage();        ///< e^{-1} / (1 + x^2)
StorageCandidate half_square_storage(); ///< |x|^2 / 2

/// Registry names: ex24, counterexample, ex41, ex42, lqr.
std::vector<std::string> names();
ProblemInstance by_name(const std::string& name);

/// Experiment settings the CLI falls back to for a registry problem.
struct Defaults {
    std::optional<StorageCandidate> storage;
    Box storage_domain{Vec::Constant(1, -100.0), Vec::Constant(1, 100.0)};
    std::optional<PatternTemplate> pattern;
    std::vector<double> horizons;
};
Defaults defaults(const std::string& name);

/// x' = u, l = x^2 + u^2, x0 = 1 as a regulator instance.
QRProblem scalar_lqr_regulator();
/// x' = -x^3 + u, l = x^2 + u^2, x0 = 1.
QRProblem cubic_regulator();

}  // namespace patternlab::builtin
