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

#include <functional>
#include <vector>

namespace patternlab {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    bool infinite = false;
    double infinite_at = 0.0;  ///< first confirmed +inf sample, if any
    long evaluations = 0;
};

/// Globally adaptive Gauss-Kronrod 7/15 quadrature of f over [a, b].
///
/// The interval is first cut at every point of `splits` inside (a, b). A +inf sample
/// triggers a dense confirmation pass over its panel; a second +inf there makes the
/// integral +inf, otherwise the panel is cut at the isolated point and refined further.
/// Refinement stops once the error estimate is below max(abs_tol, rel_tol |value|).
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                    const std::vector<double>& splits = {}, int max_panels = 20000,
                                    double rel_tol = 0.0);

}  // namespace patternlab
