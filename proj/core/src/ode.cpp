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

#include "patternlab/ode.hpp"

#include "patternlab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace patternlab {

namespace {

// Dormand-Prince coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct StepResult {
    Vec y;
    Vec f;  // derivative at the new point (FSAL stage)
    double err = 0.0;
    bool finite = true;
};

class Stepper {
public:
    Stepper(const OdeRhs& rhs, double sign, double seg_lo, double seg_hi, const OdeOptions& opts)
        : rhs_(rhs), sign_(sign), opts_(opts) {
        lo_ = std::nextafter(seg_lo, seg_hi);
        hi_ = std::nextafter(seg_hi, seg_lo);
        if (lo_ > hi_) lo_ = hi_ = 0.5 * (seg_lo + seg_hi);
    }

    // Right-hand side in the integration variable s = sign * t.
    Vec eval(double s, const Vec& y) const {
        const double t = std::clamp(sign_ * s, lo_, hi_);
        Vec f = rhs_(t, y);
        if (f.size() != y.size()) throw DimensionError("right-hand side returned the wrong dimension");
        if (sign_ < 0.0) f = -f;
        return f;
    }

    StepResult step(double s, const Vec& y, const Vec& k1, double h) const {
        StepResult r;
        const Vec k2 = eval(s + c2 * h, y + h * (a21 * k1));
        const Vec k3 = eval(s + c3 * h, y + h * (a31 * k1 + a32 * k2));
        const Vec k4 = eval(s + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Vec k5 = eval(s + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Vec k6 = eval(s + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        r.y = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        r.f = eval(s + h, r.y);
        r.finite = r.y.allFinite() && r.f.allFinite();
        if (!r.finite) return r;
        const Vec err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * r.f);
        double acc = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const double sc = opts_.atol + opts_.rtol * std::max(std::abs(y(i)), std::abs(r.y(i)));
            const double q = err(i) / sc;
            acc += q * q;
        }
        r.err = y.size() ? std::sqrt(acc / static_cast<double>(y.size())) : 0.0;
        return r;
    }

private:
    const OdeRhs& rhs_;
    double sign_;
    double lo_;
    double hi_;
    const OdeOptions& opts_;
};

double initial_step(const Stepper& st, double s, const Vec& y, const Vec& f, double span,
                    const OdeOptions& opts) {
    auto norm = [&](const Vec& v) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            const double q = v(i) / (opts.atol + opts.rtol * std::abs(y(i)));
            acc += q * q;
        }
        return v.size() ? std::sqrt(acc / static_cast<double>(v.size())) : 0.0;
    };
    const double d0 = norm(y), d1 = norm(f);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span);
    const Vec f1 = st.eval(s + h0, y + h0 * f);
    const double d2 = norm(f1 - f) / h0;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 1.0 / 5.0);
    return std::min({100 * h0, h1, span});
}

}  // namespace

Vec DenseSolution::at(double time) const {
    if (t.empty()) throw IntegrationError("empty solution");
    if (time <= t.front()) return y.front();
    if (time >= t.back()) return y.back();
    const auto it = std::upper_bound(t.begin(), t.end(), time);
    const auto k = static_cast<std::size_t>(it - t.begin()) - 1;
    const double h = t[k + 1] - t[k];
    const double th = (time - t[k]) / h;
    const double th2 = th * th, th3 = th2 * th;
    const double h00 = 2 * th3 - 3 * th2 + 1, h10 = th3 - 2 * th2 + th;
    const double h01 = -2 * th3 + 3 * th2, h11 = th3 - th2;
    return h00 * y[k] + h10 * h * dy_right[k] + h01 * y[k + 1] + h11 * h * dy_left[k + 1];
}

Vec DenseSolution::derivative(double time) const {
    if (t.size() < 2) throw IntegrationError("solution has no interval");
    if (time >= t.back()) return dy_left.back();
    if (time <= t.front()) return dy_right.front();
    const auto it = std::lower_bound(t.begin(), t.end(), time);
    const auto k = static_cast<std::size_t>(it - t.begin()) - 1;
    const double h = t[k + 1] - t[k];
    const double th = (time - t[k]) / h;
    const double th2 = th * th;
    const double d00 = (6 * th2 - 6 * th) / h, d10 = 3 * th2 - 4 * th + 1;
    const double d01 = (-6 * th2 + 6 * th) / h, d11 = 3 * th2 - 2 * th;
    return d00 * y[k] + d10 * dy_right[k] + d01 * y[k + 1] + d11 * dy_left[k + 1];
}

DenseSolution integrate_ode(const OdeRhs& rhs, double t0, double t1, const Vec& y0,
                            std::vector<double> breakpoints, const OdeOptions& opts,
                            const std::function<bool(const Vec&)>& escaped,
                            const std::function<void(Vec&)>& post_step) {
    if (!std::isfinite(t0) || !std::isfinite(t1)) throw IntegrationError("integration span must be finite");
    if (!y0.allFinite()) throw IntegrationError("nonfinite initial state");
    const double sign = t1 >= t0 ? 1.0 : -1.0;

    // Segment ends in the integration variable s = sign * t.
    std::vector<double> ends;
    const double s0 = sign * t0, s1 = sign * t1;
    for (double b : breakpoints) {
        const double s = sign * b;
        if (std::isfinite(s) && s > s0 && s < s1) ends.push_back(s);
    }
    std::sort(ends.begin(), ends.end());
    ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
    ends.push_back(s1);

    DenseSolution out;
    std::vector<double> ss{s0};
    std::vector<Vec> ys{y0};
    std::vector<Vec> fl{Vec()};
    std::vector<Vec> fr;

    double s = s0;
    Vec y = y0;
    double h_prev = opts.initial_step;
    long steps = 0;

    for (double seg_end : ends) {
        if (seg_end <= s) continue;
        const double seg_lo = sign > 0 ? s : -seg_end;
        const double seg_hi = sign > 0 ? seg_end : -s;
        Stepper st(rhs, sign, seg_lo, seg_hi, opts);
        Vec f = st.eval(s, y);
        if (!f.allFinite()) throw IntegrationError("nonfinite right-hand side at t = " + format_number(sign * s));
        fr.push_back(f);
        if (fl.back().size() == 0) fl.back() = f;

        const double span = seg_end - s;
        double h;
        if (opts.fixed_step > 0) {
            h = opts.fixed_step;
        } else if (h_prev > 0) {
            h = std::min(h_prev, span);
        } else {
            h = initial_step(st, s, y, f, span, opts);
        }
        h = std::min(h, opts.max_step);

        while (s < seg_end) {
            if (++steps > opts.max_steps) throw IntegrationError("step budget exhausted");
            const double remaining = seg_end - s;
            bool last = false;
            if (h >= remaining * (1 - 1e-12)) {
                h = remaining;
                last = true;
            }
            const double hmin = 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(s));
            if (h < hmin) {
                if (escaped && escaped(y)) {
                    out.escaped = true;
                    out.escape_time = sign * s;
                    break;
                }
                throw IntegrationError("step size underflow at t = " + format_number(sign * s));
            }
            StepResult r = st.step(s, y, f, h);
            if (opts.fixed_step <= 0 && (!r.finite || r.err > 1.0)) {
                const double fac = r.finite ? std::max(0.2, 0.9 * std::pow(r.err, -0.2)) : 0.25;
                h *= fac;
                continue;
            }
            if (!r.finite) throw IntegrationError("nonfinite state at t = " + format_number(sign * (s + h)));

            if (escaped && escaped(r.y)) {
                // Bisect on the step length for the first escaped state.
                double lo = 0.0, hi = h;
                StepResult hi_res = r;
                while (hi - lo > opts.event_time_tol) {
                    const double mid = 0.5 * (lo + hi);
                    StepResult m = st.step(s, y, f, mid);
                    if (!m.finite || escaped(m.y)) {
                        hi = mid;
                        if (m.finite) hi_res = m;
                    } else {
                        lo = mid;
                    }
                }
                s = s + hi;
                ss.push_back(s);
                ys.push_back(hi_res.y);
                fl.push_back(hi_res.f);
                fr.push_back(hi_res.f);
                out.escaped = true;
                out.escape_time = sign * s;
                break;
            }

            s = last ? seg_end : s + h;
            y = std::move(r.y);
            f = std::move(r.f);
            if (post_step) {
                post_step(y);
                f = st.eval(s, y);
            }
            ss.push_back(s);
            ys.push_back(y);
            fl.push_back(f);
            fr.push_back(f);
            if (opts.fixed_step <= 0) {
                const double fac = r.err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(r.err, -0.2), 0.2, 5.0);
                h_prev = std::min(h * fac, opts.max_step);
                h = h_prev;
            }
        }
        if (out.escaped) break;
        // The node closing a segment gets the next segment's derivative as its right value.
        fr.pop_back();
    }
    if (fr.size() < ss.size()) fr.push_back(fl.back());

    // Convert from s back to t, reversing for backward integrations.
    const std::size_t n = ss.size();
    out.t.resize(n);
    out.y.resize(n);
    out.dy_left.resize(n);
    out.dy_right.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = sign > 0 ? i : n - 1 - i;
        out.t[j] = sign * ss[i];
        out.y[j] = ys[i];
        if (sign > 0) {
            out.dy_left[j] = fl[i];
            out.dy_right[j] = fr[i];
        } else {
            // Derivatives in s flip sign; left and right swap under time reversal.
            out.dy_left[j] = -fr[i];
            out.dy_right[j] = -fl[i];
        }
    }
    return out;
}

}  // namespace patternlab
