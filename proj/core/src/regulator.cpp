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

#include "patternlab/regulator.hpp"

#include "patternlab/errors.hpp"
#include "patternlab/quadrature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace patternlab {

namespace {

Vec flatten(const Mat& P) { return Eigen::Map<const Vec>(P.data(), P.size()); }
Mat unflatten(const Vec& v, int n) { return Eigen::Map<const Mat>(v.data(), n, n); }

void check_dims(const Mat& A, const Mat& B, const Mat& Q, const Mat& R) {
    const auto n = A.rows(), m = B.cols();
    if (A.cols() != n || B.rows() != n || Q.rows() != n || Q.cols() != n || R.rows() != m || R.cols() != m)
        throw DimensionError("inconsistent Riccati data dimensions");
}

Mat kron(const Mat& X, const Mat& Y) {
    Mat K(X.rows() * Y.rows(), X.cols() * Y.cols());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (Eigen::Index j = 0; j < X.cols(); ++j) K.block(i * Y.rows(), j * Y.cols(), Y.rows(), Y.cols()) = X(i, j) * Y;
    }
    return K;
}

// Solves F^T X + X F + W = 0; column-major vec turns it into (I kron F^T + F^T kron I) vec X = -vec W.
Mat lyapunov(const Mat& F, const Mat& W) {
    const auto n = F.rows();
    const Mat I = Mat::Identity(n, n);
    const Mat L = kron(I, F.transpose()) + kron(F.transpose(), I);
    const Vec x = L.fullPivLu().solve(-flatten(W));
    const Mat X = unflatten(x, static_cast<int>(n));
    return 0.5 * (X + X.transpose());
}

bool hurwitz(const Mat& F) { return (F.eigenvalues().real().array() < 0.0).all(); }

}  // namespace

RiccatiPath::RiccatiPath(DenseSolution sol, int n, Mat B, Mat R)
    : sol_(std::move(sol)), n_(n), B_(std::move(B)), R_(std::move(R)) {}

Mat RiccatiPath::at(double t) const { return unflatten(sol_.at(t), n_); }

Mat RiccatiPath::gain(double t) const { return R_.ldlt().solve(B_.transpose() * at(t)); }

void RiccatiPath::write_csv(std::ostream& os) const {
    os << "t";
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) os << ",p_" << i + 1 << '_' << j + 1;
    }
    os << "\n";
    for (std::size_t k = 0; k < sol_.t.size(); ++k) {
        const Mat P = unflatten(sol_.y[k], n_);
        os << format_number(sol_.t[k]);
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j < n_; ++j) os << ',' << format_number(P(i, j));
        }
        os << "\n";
    }
}

Mat riccati_residual(const Mat& A, const Mat& B, const Mat& Q, const Mat& R, const Mat& P) {
    return A.transpose() * P + P * A - P * B * R.ldlt().solve(B.transpose() * P) + Q;
}

RiccatiPath riccati_finite(const Mat& A, const Mat& B, const Mat& Q, const Mat& R, double T, double tol) {
    check_dims(A, B, Q, R);
    if (!std::isfinite(T) || !(T > 0.0)) throw std::invalid_argument("horizon must be finite and positive");
    const int n = static_cast<int>(A.rows());
    const Mat S = B * R.ldlt().solve(B.transpose());
    auto rhs = [&](double, const Vec& y) {
        const Mat P = unflatten(y, n);
        return flatten(-(A.transpose() * P + P * A - P * S * P + Q));
    };
    OdeOptions o;
    o.rtol = tol;
    o.atol = tol * 1e-2;
    auto escaped = [](const Vec& y) { return !(y.cwiseAbs().maxCoeff() <= 1e100); };
    auto symmetrize = [n](Vec& y) {
        Mat P = unflatten(y, n);
        y = flatten(0.5 * (P + P.transpose()));
    };
    DenseSolution sol = integrate_ode(rhs, T, 0.0, Vec::Zero(n * n), {}, o, escaped, symmetrize);
    if (sol.escaped) throw BlowUpError("Riccati solution escaped", sol.escape_time);
    return RiccatiPath(std::move(sol), n, B, R);
}

AlgebraicRiccati riccati_algebraic(const Mat& A, const Mat& B, const Mat& Q, const Mat& R, double tol) {
    check_dims(A, B, Q, R);
    AlgebraicRiccati out;
    const Mat Rinv_Bt = R.ldlt().solve(B.transpose());
    Mat K;
    // Seed: the gain of a finite-horizon solution long enough to stabilize A - B K.
    for (double T = 10.0; T <= 640.0; T *= 2) {
        try {
            const RiccatiPath path = riccati_finite(A, B, Q, R, T, 1e-10);
            K = Rinv_Bt * path.at(0.0);
        } catch (const BlowUpError&) {
            break;
        }
        if (hurwitz(A - B * K)) {
            out.seed_horizon = T;
            break;
        }
        K.resize(0, 0);
    }
    if (K.size() == 0) throw IntegrationError("no stabilizing seed gain; (A, B) is likely not stabilizable");
    Mat P;
    for (int it = 1; it <= 100; ++it) {
        const Mat F = A - B * K;
        P = lyapunov(F, Q + K.transpose() * R * K);
        K = Rinv_Bt * P;
        out.iterations = it;
        out.residual = riccati_residual(A, B, Q, R, P).cwiseAbs().maxCoeff();
        if (out.residual < tol) break;
    }
    out.P = P;
    if (!(out.residual < tol)) throw IntegrationError("Newton-Kleinman did not reach the residual tolerance");
    return out;
}

void QRProblem::validate(const Box& sample_box) const {
    const auto m = system.control_dim;
    if (R.rows() != m || R.cols() != m) throw DimensionError("R must be m x m");
    if ((R - R.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + R.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("R must be symmetric");
    if (!(Eigen::SelfAdjointEigenSolver<Mat>(R).eigenvalues().minCoeff() > 0.0))
        throw std::invalid_argument("R must be positive definite");
    if (x0.size() != system.state_dim) throw DimensionError("initial state dimension mismatch");
    Box box = sample_box;
    if (box.dim() != system.state_dim)
        box = Box{Vec::Constant(system.state_dim, sample_box.lower(0)), Vec::Constant(system.state_dim, sample_box.upper(0))};
    for (double t : {0.0, 1.0, 10.0}) {
        for (const auto& x : box_grid(box, system.state_dim == 1 ? 101 : 11)) {
            const double lhs = system.drift(t, x).norm() + system.input_matrix(t, x).norm();
            if (lhs > growth_constant * (1.0 + x.norm()) + 1e-9)
                throw std::invalid_argument("declared growth constant is violated at x = " + format_number(x(0)));
        }
    }
}

ProblemInstance QRProblem::to_problem() const {
    ProblemInstance p;
    p.name = name;
    p.system = system;
    const Mat Rc = R;
    p.cost.ell1 = ell1;
    p.cost.ell2 = [Rc](double, const Vec&, const Vec& u) { return u.dot(Rc * u); };
    const double alpha = Eigen::SelfAdjointEigenSolver<Mat>(R).eigenvalues().minCoeff();
    GrowthBound g;
    g.alpha = alpha;
    p.cost.growth = g;
    p.x0 = x0;
    p.control_set = ControlValueSet::full_space(system.control_dim, 2.0);
    p.u_star = Vec::Zero(system.control_dim);
    p.regularity_asserted = true;
    return p;
}

QRProblem QRProblem::linear_instance(const Mat& A, const Mat& B, const Mat& Q, const Mat& R, const Vec& x0) {
    check_dims(A, B, Q, R);
    QRProblem qr;
    qr.name = "linear-qr";
    qr.system.state_dim = static_cast<int>(A.rows());
    qr.system.control_dim = static_cast<int>(B.cols());
    qr.system.drift = [A](double, const Vec& x) { return Vec(A * x); };
    qr.system.input_matrix = [B](double, const Vec&) { return B; };
    qr.system.drift_jacobian = [A](double, const Vec&) { return A; };
    qr.system.input_jacobian = [n = A.rows()](double, const Vec&, const Vec&) { return Mat(Mat::Zero(n, n)); };
    qr.R = R;
    qr.ell1 = [Q](double, const Vec& x) { return x.dot(Q * x); };
    qr.x0 = x0;
    qr.growth_constant = A.norm() + B.norm();
    qr.linear = LinearData{A, B, Q};
    return qr;
}

std::string to_string(QRAlternative a) {
    switch (a) {
        case QRAlternative::InfiniteCost: return "alternative-A-infinite-cost";
        case QRAlternative::ConvergentControls: return "alternative-B-convergent-controls";
        case QRAlternative::Undetermined: return "undetermined";
    }
    return "undetermined";
}

void QRExperimentReport::write_csv(std::ostream& os) const {
    os << "T,cost,kkt_residual,window_distance,riccati_cost,feedback_distance,status\n";
    for (const auto& r : rows) {
        os << format_number(r.horizon) << ',' << format_number(r.cost) << ',' << format_number(r.kkt_residual) << ','
           << (r.window_distance ? format_number(*r.window_distance) : "") << ',' << (r.riccati_cost ? format_number(*r.riccati_cost) : "") << ','
           << (r.feedback_distance ? format_number(*r.feedback_distance) : "") << ',' << (r.ok ? "ok" : "failed")
           << "\n";
    }
}

namespace {

double window_l2(const std::function<Vec(double)>& f, const std::function<Vec(double)>& g, double W,
                 const std::vector<double>& splits) {
    auto sq = [&](double t) { return (f(t) - g(t)).squaredNorm(); };
    return std::sqrt(integrate_adaptive(sq, 0.0, W, 1e-12, splits).value);
}

}  // namespace

QRExperimentReport qr_horizon_experiment(const QRProblem& qr, const std::vector<double>& horizons,
                                         const QRExperimentOptions& opts) {
    if (horizons.empty()) throw std::invalid_argument("no horizons");
    QRExperimentReport rep;
    rep.window = opts.window > 0.0 ? opts.window : horizons.front();
    rep.note = "window L2 Cauchy evidence; cannot separate full-sequence from subsequence convergence";
    const ProblemInstance problem = qr.to_problem();
    const double W = rep.window;
    std::optional<DiscretizedControl> prev;
    for (double T : horizons) {
        QRHorizonRow row;
        row.horizon = T;
        const int M = std::max(1, static_cast<int>(std::ceil(opts.cells_per_unit * T)));
        try {
            const DirectSolution s = solve_direct(problem, T, M, opts.direct);
            row.cost = s.cost;
            row.kkt_residual = s.kkt_residual;
            row.ok = std::isfinite(s.cost);
            const ControlSignal u = s.control.to_signal(problem.u_star);
            const double w = std::min(W, T);
            std::vector<double> splits = u.breakpoints();
            if (prev) {
                const ControlSignal v = prev->to_signal(problem.u_star);
                splits.insert(splits.end(), v.breakpoints().begin(), v.breakpoints().end());
                row.window_distance = window_l2([&](double t) { return u.evaluate(t); },
                                                [&](double t) { return v.evaluate(t); }, w, splits);
            }
            if (qr.linear) {
                const auto& L = *qr.linear;
                const RiccatiPath path = riccati_finite(L.A, L.B, L.Q, qr.R, T);
                row.riccati_cost = qr.x0.dot(path.at(0.0) * qr.x0);
                auto rhs = [&](double t, const Vec& x) { return Vec(L.A * x - L.B * (path.gain(t) * x)); };
                OdeOptions o;
                o.rtol = 1e-11;
                o.atol = 1e-13;
                const DenseSolution xs = integrate_ode(rhs, 0.0, T, qr.x0, {}, o);
                row.feedback_distance = window_l2([&](double t) { return u.evaluate(t); },
                                                  [&](double t) { return Vec(-(path.gain(t) * xs.at(t))); }, w,
                                                  u.breakpoints());
            }
            prev = s.control;
            rep.controls.push_back(s.control);
        } catch (const std::exception& ex) {
            row.error = ex.what();
        }
        rep.rows.push_back(std::move(row));
    }

    // Costs growing without a shrinking increment, or failures, point to alternative (A).
    std::vector<double> costs;
    for (const auto& r : rep.rows) costs.push_back(r.ok ? r.cost : kInf);
    const bool any_inf = std::any_of(costs.begin(), costs.end(), [](double c) { return !std::isfinite(c); });
    bool growing = false;
    if (costs.size() >= 3 && !any_inf) {
        const double d1 = costs[costs.size() - 1] - costs[costs.size() - 2];
        const double d0 = costs[costs.size() - 2] - costs[costs.size() - 3];
        growing = d1 > opts.cauchy_tol * (1.0 + std::abs(costs.back())) && d1 >= 0.75 * d0;
    }
    const bool cauchy = rep.rows.size() >= 2 && rep.rows.back().ok && rep.rows.back().window_distance &&
                        *rep.rows.back().window_distance < opts.cauchy_tol;
    if (any_inf || growing) {
        rep.verdict = QRAlternative::InfiniteCost;
    } else if (cauchy) {
        rep.verdict = QRAlternative::ConvergentControls;
    }
    return rep;
}

}  // namespace patternlab
