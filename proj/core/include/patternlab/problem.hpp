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

#include "patternlab/costs.hpp"
#include "patternlab/dynamics.hpp"
#include "patternlab/signals.hpp"

#include <functional>
#include <optional>
#include <string>

namespace patternlab {

/// Dynamics, running cost, initial state and admissible control values of one problem.
struct ProblemInstance {
    std::string name;
    ControlAffineSystem system;
    RunningCost cost;
    Vec x0;
    ControlValueSet control_set;
    /// Control value used after the horizon (0 for the full space).
    Vec u_star;
    /// The strengthened local integrability of the coefficients holds (stated by the author).
    bool regularity_asserted = false;
    /// c(t,x) such that l2 = l2(t,x,0) + c(t,x) . u on U; detected when absent.
    std::optional<std::function<Vec(double, const Vec&)>> control_coefficient;
    /// State residual that must vanish on singular pieces, e.g. x - 2/3.
    std::optional<std::function<double(double, const Vec&)>> singular_residual;

    void validate() const;
};

/// Returns c(t,x) for costs affine in u on a box; throws InapplicableError otherwise.
std::function<Vec(double, const Vec&)> affine_control_coefficient(const ProblemInstance& problem);

}  // namespace patternlab
