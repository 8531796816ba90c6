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

#include <string>
#include <vector>

namespace patternlab {

/// Admissible control values U together with the integrability exponent p.
///
/// A compact box pairs with p = inf; the full space R^m pairs with a finite p > 1.
class ControlValueSet {
public:
    enum class Kind { FullSpace, Box };

    /// The unit interval [0, 1].
    ControlValueSet() : ControlValueSet(interval(0.0, 1.0)) {}

    static ControlValueSet full_space(int dim, double exponent);
    static ControlValueSet box(Vec lower, Vec upper);
    static ControlValueSet interval(double lower, double upper);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    double exponent() const { return exponent_; }
    bool is_compact() const { return kind_ == Kind::Box; }
    const Vec& lower() const { return lower_; }
    const Vec& upper() const { return upper_; }

    bool contains(const Vec& v, double tol = 1e-12) const;
    Vec project(const Vec& v) const;
    /// Corners of a box (2^m of them); throws for the full space.
    std::vector<Vec> vertices() const;
    Vec midpoint() const;

private:
    struct Raw {};
    explicit ControlValueSet(Raw) {}
    Kind kind_ = Kind::FullSpace;
    int dim_ = 0;
    double exponent_ = 2.0;
    Vec lower_;
    Vec upper_;
};

/// Euclidean projection; componentwise clamp for a box, identity for the full space.
Vec project_onto_U(const Vec& v, const ControlValueSet& U);

/// Piecewise-constant control on [0, T] with a constant tail value on (T, inf).
///
/// Piece j is active on the half-open interval [tau_{j-1}, tau_j). Coincident
/// breakpoints produce empty pieces, which are never selected. At t >= T the
/// tail value is returned. With T = inf the tail is never reached.
class ControlSignal {
public:
    /// Scalar zero signal on [0, 1].
    ControlSignal();
    ControlSignal(std::vector<double> breakpoints, std::vector<Vec> pieces, Vec tail);

    static ControlSignal constant(const Vec& value, double horizon, const Vec& tail);
    static ControlSignal constant(double value, double horizon, double tail = 0.0);
    /// Scalar helper: values[j] on [breakpoints[j], breakpoints[j+1]).
    static ControlSignal scalar(std::vector<double> breakpoints, const std::vector<double>& values,
                                double tail = 0.0);

    double horizon() const { return breakpoints_.back(); }
    int dim() const { return static_cast<int>(tail_.size()); }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<Vec>& pieces() const { return pieces_; }
    const Vec& tail() const { return tail_; }

    Vec evaluate(double t) const { return value_at(t); }
    const Vec& value_at(double t) const;
    double evaluate_scalar(double t) const { return evaluate(t)(0); }

    /// Distinct finite breakpoints strictly inside (0, T), plus T when finite.
    std::vector<double> switch_times() const;

    /// Pieces in U and tail rule (0 for finite p, member of U for p = inf).
    bool admissible(const ControlValueSet& U, double tol = 1e-12) const;

    /// The same control restricted to [0, T'] with the given tail afterwards.
    ControlSignal truncated(double new_horizon, const Vec& tail) const;

    bool operator==(const ControlSignal& other) const;

private:
    std::vector<double> breakpoints_;
    std::vector<Vec> pieces_;
    Vec tail_;
};

/// Text record `{T=..; breakpoints=[..]; piece_values=[[..],..]; tail_value=[..]}`.
std::string to_record(const ControlSignal& u);
ControlSignal signal_from_record(const std::string& record);

}  // namespace patternlab
