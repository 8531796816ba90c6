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

#include "patternlab/types.hpp"

#include <functional>
#include <vector>

namespace patternlab {

using OdeRhs = std::function<Vec(double, const Vec&)>;

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double initial_step = 0.0;  ///< 0 selects a step automatically
    double max_step = kInf;
    double fixed_step = 0.0;    ///< > 0 disables error control
    double event_time_tol = 1e-10;
    long max_steps = 5'000'000;
};

/// Accepted-step nodes of an integration with cubic Hermite interpolation between them.
///
/// Times are always increasing, also for backward integrations. Each node keeps the
/// derivative of the step arriving at it and of the step leaving it, so a jump in the
/// right-hand side at a breakpoint does not pollute either neighbouring interval.
struct DenseSolution {
    std::vector<double> t;
    std::vector<Vec> y;
    std::vector<Vec> dy_left;
    std::vector<Vec> dy_right;
    bool escaped = false;
    double escape_time = kInf;

    double front() const { return t.front(); }
    double back() const { return t.back(); }
    Vec at(double time) const;
    /// Derivative of the interpolant; at a node, the value arriving from the left.
    Vec derivative(double time) const;
};

/// Dormand-Prince 5(4) from t0 to t1 (either direction), restarted at every breakpoint.
///
/// Stage times are kept strictly inside the current segment so discontinuous coefficients
/// always resolve to the segment's own side. If `escaped` reports true for an accepted
/// state, the step is bisected down to `event_time_tol`, the first escaped state closes
/// the solution and `escaped`/`escape_time` are set. `post_step` may modify every
/// accepted state in place.
DenseSolution integrate_ode(const OdeRhs& rhs, double t0, double t1, const Vec& y0,
                            std::vector<double> breakpoints, const OdeOptions& opts,
                            const std::function<bool(const Vec&)>& escaped = {},
                            const std::function<void(Vec&)>& post_step = {});

}  // namespace patternlab
