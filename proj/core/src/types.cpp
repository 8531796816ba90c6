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

#include "patternlab/types.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace patternlab {

bool Box::contains(const Vec& x, double tol) const {
    if (x.size() != lower.size()) return false;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x(i) < lower(i) - tol || x(i) > upper(i) + tol) return false;
    }
    return true;
}

std::vector<double> linspace(double a, double b, int n) {
    if (n < 1) throw std::invalid_argument("linspace needs at least one point");
    if (n == 1) return {a};
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[i] = a + (b - a) * static_cast<double>(i) / (n - 1);
    out.back() = b;
    return out;
}

std::vector<Vec> box_grid(const Box& box, int points_per_axis) {
    const int n = box.dim();
    std::vector<std::vector<double>> axes;
    axes.reserve(n);
    for (int i = 0; i < n; ++i) axes.push_back(linspace(box.lower(i), box.upper(i), points_per_axis));

    std::vector<Vec> out;
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    while (true) {
        Vec p(n);
        for (int i = 0; i < n; ++i) p(i) = axes[i][idx[i]];
        out.push_back(std::move(p));
        int k = 0;
        while (k < n && ++idx[k] == static_cast<int>(axes[k].size())) idx[k++] = 0;
        if (k == n) break;
    }
    return out;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace patternlab
