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

#include <Eigen/Dense>

#include <limits>
#include <string>
#include <vector>

namespace patternlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Axis-aligned box [lower, upper] in R^n.
struct Box {
    Vec lower;
    Vec upper;

    int dim() const { return static_cast<int>(lower.size()); }
    bool contains(const Vec& x, double tol = 0.0) const;
};

std::vector<double> linspace(double a, double b, int n);

/// Tensor grid with `points_per_axis` nodes on every axis of the box.
std::vector<Vec> box_grid(const Box& box, int points_per_axis);

/// Shortest decimal representation that round-trips ("inf", "-inf", "nan" for non-finite).
std::string format_number(double v);

}  // namespace patternlab
