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

#include "patternlab/problem.hpp"

#include "patternlab/errors.hpp"

#include <cmath>

namespace patternlab {

void ProblemInstance::validate() const {
    if (system.state_dim < 1 || system.control_dim < 1) throw DimensionError("problem dimensions must be positive");
    if (x0.size() != system.state_dim) throw DimensionError("x0 does not match the state dimension");
    if (control_set.dim() != system.control_dim) throw DimensionError("control set does not match the control dimension");
    if (u_star.size() != system.control_dim) throw DimensionError("reference control does not match the control dimension");
    if (!system.drift || !system.input_matrix) throw std::invalid_argument("dynamics are incomplete");
    if (control_set.is_compact() && !control_set.contains(u_star))
        throw std::invalid_argument("reference control must lie in U");
    if (!control_set.is_compact() && !u_star.isZero())
        throw std::invalid_argument("reference control must be 0 for the full control space");
}

std::function<Vec(double, const Vec&)> affine_control_coefficient(const ProblemInstance& problem) {
    if (problem.control_coefficient) return *problem.control_coefficient;
    const auto& U = problem.control_set;
    if (!U.is_compact()) throw InapplicableError("switching analysis needs a box control set");
    const int m = U.dim();
    const RunningCost cost = problem.cost;
    const Vec lo = U.lower(), hi = U.upper(), mid = U.midpoint();

    auto coefficient = [cost, lo, hi, mid, m](double t, const Vec& x) {
        Vec c(m);
        for (int i = 0; i < m; ++i) {
            Vec a = mid, b = mid;
            a(i) = lo(i);
            b(i) = hi(i);
            c(i) = hi(i) > lo(i) ? (cost.ell2(t, x, b) - cost.ell2(t, x, a)) / (hi(i) - lo(i)) : 0.0;
        }
        return c;
    };

    // Affinity along every axis at a few states and times: the midpoint value must be the chord average,
    // and so must the quarter points.
    std::vector<Vec> xs{problem.x0, problem.x0 + Vec::Ones(problem.x0.size()), 0.5 * problem.x0};
    for (double t : {0.0, 0.5, 1.7}) {
        for (const auto& x : xs) {
            for (int i = 0; i < m; ++i) {
                if (!(hi(i) > lo(i))) continue;
                for (double w : {0.25, 0.5, 0.75}) {
                    Vec a = mid, b = mid, q = mid;
                    a(i) = lo(i);
                    b(i) = hi(i);
                    q(i) = lo(i) + w * (hi(i) - lo(i));
                    const double la = cost.ell2(t, x, a), lb = cost.ell2(t, x, b), lq = cost.ell2(t, x, q);
                    const double chord = (1 - w) * la + w * lb;
                    if (!std::isfinite(lq) || std::abs(lq - chord) > 1e-9 * (1 + std::abs(chord)))
                        throw InapplicableError("running cost is not affine in the control");
                }
            }
        }
    }
    return coefficient;
}

}  // namespace patternlab
