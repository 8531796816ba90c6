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

#include "patternlab/signals.hpp"

#include "patternlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace patternlab {

ControlValueSet ControlValueSet::full_space(int dim, double exponent) {
    if (dim < 1) throw std::invalid_argument("control dimension must be positive");
    if (!(exponent > 1.0) || std::isinf(exponent))
        throw std::invalid_argument("full-space control sets need a finite exponent p > 1");
    ControlValueSet s{Raw{}};
    s.kind_ = Kind::FullSpace;
    s.dim_ = dim;
    s.exponent_ = exponent;
    s.lower_ = Vec::Constant(dim, -kInf);
    s.upper_ = Vec::Constant(dim, kInf);
    return s;
}

ControlValueSet ControlValueSet::box(Vec lower, Vec upper) {
    if (lower.size() != upper.size() || lower.size() < 1)
        throw DimensionError("box bounds must have equal, positive dimension");
    for (Eigen::Index i = 0; i < lower.size(); ++i) {
        if (!std::isfinite(lower(i)) || !std::isfinite(upper(i)) || lower(i) > upper(i))
            throw std::invalid_argument("box bounds must be finite with lower <= upper");
    }
    ControlValueSet s{Raw{}};
    s.kind_ = Kind::Box;
    s.dim_ = static_cast<int>(lower.size());
    s.exponent_ = kInf;
    s.lower_ = std::move(lower);
    s.upper_ = std::move(upper);
    return s;
}

ControlValueSet ControlValueSet::interval(double lower, double upper) {
    return box(Vec::Constant(1, lower), Vec::Constant(1, upper));
}

bool ControlValueSet::contains(const Vec& v, double tol) const {
    if (v.size() != dim_) return false;
    if (kind_ == Kind::FullSpace) return v.allFinite();
    for (int i = 0; i < dim_; ++i) {
        if (!(v(i) >= lower_(i) - tol && v(i) <= upper_(i) + tol)) return false;
    }
    return true;
}

Vec ControlValueSet::project(const Vec& v) const {
    if (v.size() != dim_) throw DimensionError("projection: dimension mismatch");
    if (kind_ == Kind::FullSpace) return v;
    return v.cwiseMax(lower_).cwiseMin(upper_);
}

std::vector<Vec> ControlValueSet::vertices() const {
    if (kind_ != Kind::Box) throw InapplicableError("the full control space has no vertices");
    std::vector<Vec> out;
    const unsigned count = 1u << dim_;
    for (unsigned mask = 0; mask < count; ++mask) {
        Vec v(dim_);
        for (int i = 0; i < dim_; ++i) v(i) = (mask >> i) & 1u ? upper_(i) : lower_(i);
        out.push_back(std::move(v));
    }
    return out;
}

Vec ControlValueSet::midpoint() const {
    if (kind_ == Kind::FullSpace) return Vec::Zero(dim_);
    return 0.5 * (lower_ + upper_);
}

Vec project_onto_U(const Vec& v, const ControlValueSet& U) { return U.project(v); }

ControlSignal::ControlSignal() : ControlSignal({0.0, 1.0}, {Vec::Zero(1)}, Vec::Zero(1)) {}

ControlSignal::ControlSignal(std::vector<double> breakpoints, std::vector<Vec> pieces, Vec tail)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)), tail_(std::move(tail)) {
    if (pieces_.empty()) throw std::invalid_argument("a control signal needs at least one piece");
    if (breakpoints_.size() != pieces_.size() + 1)
        throw std::invalid_argument("breakpoints must number pieces + 1");
    if (breakpoints_.front() != 0.0) throw std::invalid_argument("the first breakpoint must be 0");
    for (std::size_t j = 1; j < breakpoints_.size(); ++j) {
        if (std::isnan(breakpoints_[j]) || breakpoints_[j] < breakpoints_[j - 1])
            throw std::invalid_argument("breakpoints must be nondecreasing");
    }
    if (!(breakpoints_.back() > 0.0)) throw std::invalid_argument("the horizon must be positive");
    for (std::size_t j = 0; j + 1 < breakpoints_.size(); ++j) {
        if (std::isinf(breakpoints_[j]) && j + 1 < breakpoints_.size() - 1 &&
            !std::isinf(breakpoints_[j + 1]))
            throw std::invalid_argument("breakpoints must be nondecreasing");
    }
    for (const auto& p : pieces_) {
        if (p.size() != tail_.size()) throw DimensionError("piece and tail dimensions differ");
    }
}

ControlSignal ControlSignal::constant(const Vec& value, double horizon, const Vec& tail) {
    return ControlSignal({0.0, horizon}, {value}, tail);
}

ControlSignal ControlSignal::constant(double value, double horizon, double tail) {
    return constant(Vec::Constant(1, value), horizon, Vec::Constant(1, tail));
}

ControlSignal ControlSignal::scalar(std::vector<double> breakpoints, const std::vector<double>& values,
                                    double tail) {
    std::vector<Vec> pieces;
    pieces.reserve(values.size());
    for (double v : values) pieces.push_back(Vec::Constant(1, v));
    return ControlSignal(std::move(breakpoints), std::move(pieces), Vec::Constant(1, tail));
}

const Vec& ControlSignal::value_at(double t) const {
    if (!(t >= 0.0)) throw std::invalid_argument("control signals are defined for t >= 0");
    if (t >= horizon()) return tail_;
    // First breakpoint strictly greater than t closes the active piece.
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    const auto j = static_cast<std::size_t>(it - breakpoints_.begin());
    return pieces_[j - 1];
}

std::vector<double> ControlSignal::switch_times() const {
    std::vector<double> out;
    const double T = horizon();
    for (std::size_t j = 1; j + 1 < breakpoints_.size(); ++j) {
        const double b = breakpoints_[j];
        if (b > 0.0 && b < T && (out.empty() || out.back() != b)) out.push_back(b);
    }
    if (std::isfinite(T)) out.push_back(T);
    return out;
}

bool ControlSignal::admissible(const ControlValueSet& U, double tol) const {
    if (dim() != U.dim()) return false;
    for (const auto& p : pieces_) {
        if (!U.contains(p, tol)) return false;
    }
    if (std::isinf(horizon())) return true;
    if (std::isfinite(U.exponent())) return tail_.isZero();
    return U.contains(tail_, tol);
}

ControlSignal ControlSignal::truncated(double new_horizon, const Vec& tail) const {
    if (!(new_horizon > 0.0)) throw std::invalid_argument("truncation horizon must be positive");
    std::vector<double> bps{0.0};
    std::vector<Vec> pieces;
    for (std::size_t j = 0; j < pieces_.size(); ++j) {
        const double a = breakpoints_[j];
        if (a >= new_horizon) break;
        const double b = std::min(breakpoints_[j + 1], new_horizon);
        bps.push_back(b);
        pieces.push_back(pieces_[j]);
    }
    if (bps.back() < new_horizon) {
        // Horizon lies beyond the original T: the original tail fills the gap.
        bps.push_back(new_horizon);
        pieces.push_back(tail_);
    }
    return ControlSignal(std::move(bps), std::move(pieces), tail);
}

bool ControlSignal::operator==(const ControlSignal& other) const {
    if (breakpoints_ != other.breakpoints_ || pieces_.size() != other.pieces_.size()) return false;
    if (tail_.size() != other.tail_.size() || tail_ != other.tail_) return false;
    for (std::size_t j = 0; j < pieces_.size(); ++j) {
        if (pieces_[j].size() != other.pieces_[j].size() || pieces_[j] != other.pieces_[j]) return false;
    }
    return true;
}

namespace {

std::string format_vec(const Vec& v) {
    std::string s = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += format_number(v(i));
    }
    return s + "]";
}

double parse_number(const std::string& tok) {
    if (tok == "inf") return kInf;
    if (tok == "-inf") return -kInf;
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("bad number in signal record: " + tok);
    return v;
}

std::vector<double> parse_flat(const std::string& s) {
    std::string body = s;
    if (body.size() < 2 || body.front() != '[' || body.back() != ']')
        throw std::invalid_argument("expected [..] in signal record: " + s);
    body = body.substr(1, body.size() - 2);
    std::vector<double> out;
    if (body.empty()) return out;
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_number(tok));
    return out;
}

Vec to_vec(const std::vector<double>& v) {
    return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

std::string to_record(const ControlSignal& u) {
    std::string s = "{T=" + format_number(u.horizon()) + ";breakpoints=[";
    for (std::size_t j = 0; j < u.breakpoints().size(); ++j) {
        if (j) s += ',';
        s += format_number(u.breakpoints()[j]);
    }
    s += "];piece_values=[";
    for (std::size_t j = 0; j < u.pieces().size(); ++j) {
        if (j) s += ',';
        s += format_vec(u.pieces()[j]);
    }
    s += "];tail_value=" + format_vec(u.tail()) + "}";
    return s;
}

ControlSignal signal_from_record(const std::string& record) {
    if (record.size() < 2 || record.front() != '{' || record.back() != '}')
        throw std::invalid_argument("signal record must be enclosed in braces");
    const std::string body = record.substr(1, record.size() - 2);
    std::vector<double> bps;
    std::vector<Vec> pieces;
    Vec tail;
    std::stringstream ss(body);
    std::string field;
    while (std::getline(ss, field, ';')) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("malformed field: " + field);
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "T") {
            continue;  // implied by the last breakpoint
        } else if (key == "breakpoints") {
            bps = parse_flat(value);
        } else if (key == "tail_value") {
            tail = to_vec(parse_flat(value));
        } else if (key == "piece_values") {
            if (value.size() < 2 || value.front() != '[' || value.back() != ']')
                throw std::invalid_argument("malformed piece_values");
            const std::string inner = value.substr(1, value.size() - 2);
            std::size_t pos = 0;
            while (pos < inner.size()) {
                const auto close = inner.find(']', pos);
                if (inner[pos] != '[' || close == std::string::npos)
                    throw std::invalid_argument("malformed piece_values");
                pieces.push_back(to_vec(parse_flat(inner.substr(pos, close - pos + 1))));
                pos = close + 1;
                if (pos < inner.size() && inner[pos] == ',') ++pos;
            }
        } else {
            throw std::invalid_argument("unknown signal record field: " + key);
        }
    }
    return ControlSignal(std::move(bps), std::move(pieces), std::move(tail));
}

}  // namespace patternlab
