// Copyright 2026 The spinreg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spinreg/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

namespace spinreg {

namespace {

constexpr double kPi = std::numbers::pi;

double sum_sq(const Eigen::VectorXd &r) { return r.squaredNorm(); }

Eigen::VectorXd residuals(const ModelFn &model, const std::vector<double> &x, const std::vector<double> &y,
                          const std::vector<double> &p) {
    Eigen::VectorXd r(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        r[k] = y[k] - model(x[k], p);
    }
    return r;
}

Eigen::MatrixXd jacobian(const ModelFn &model, const std::vector<double> &x, std::vector<double> p) {
    Eigen::MatrixXd j(x.size(), p.size());
    for (std::size_t c = 0; c < p.size(); ++c) {
        double h = 1e-6 * std::max(std::abs(p[c]), 1e-8);
        double orig = p[c];
        p[c] = orig + h;
        std::vector<double> up(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) {
            up[k] = model(x[k], p);
        }
        p[c] = orig - h;
        for (std::size_t k = 0; k < x.size(); ++k) {
            j(k, c) = (up[k] - model(x[k], p)) / (2 * h);
        }
        p[c] = orig;
    }
    return j;
}

void check_series(const std::vector<double> &x, const std::vector<double> &y, std::size_t min_points,
                  const char *what) {
    if (x.size() != y.size()) {
        throw std::invalid_argument(std::string(what) + ": x and y differ in length");
    }
    if (x.size() < min_points) {
        throw std::invalid_argument(std::string(what) + ": need at least " + std::to_string(min_points) + " points");
    }
}

}  // namespace

FitResult levenberg_marquardt(const ModelFn &model, const std::vector<double> &x, const std::vector<double> &y,
                              std::vector<double> p0, const FitOptions &options) {
    FitResult res;
    std::vector<double> p = std::move(p0);
    const int n = static_cast<int>(p.size());
    Eigen::VectorXd r = residuals(model, x, y, p);
    double cost = sum_sq(r);
    double lambda = options.initial_lambda;
    for (res.iterations = 0; res.iterations < options.max_iterations; ++res.iterations) {
        Eigen::MatrixXd j = jacobian(model, x, p);
        Eigen::MatrixXd jtj = j.transpose() * j;
        Eigen::VectorXd g = j.transpose() * r;
        bool improved = false;
        while (lambda < 1e12) {
            Eigen::MatrixXd a = jtj;
            for (int k = 0; k < n; ++k) {
                a(k, k) += lambda * std::max(jtj(k, k), 1e-30);
            }
            Eigen::VectorXd step = a.ldlt().solve(g);
            if (!step.allFinite()) {
                lambda *= 10;
                continue;
            }
            std::vector<double> trial = p;
            for (int k = 0; k < n; ++k) {
                trial[k] += step[k];
            }
            Eigen::VectorXd rt = residuals(model, x, y, trial);
            double ct = sum_sq(rt);
            if (std::isfinite(ct) && ct <= cost) {
                double drop = cost - ct;
                p = std::move(trial);
                r = std::move(rt);
                cost = ct;
                lambda = std::max(lambda / 10, 1e-15);
                improved = true;
                if (drop <= options.tolerance * std::max(cost, 1e-30) || step.norm() < 1e-15) {
                    res.converged = true;
                }
                break;
            }
            lambda *= 10;
        }
        if (!improved) {
            res.converged = true;
            break;
        }
        if (res.converged) {
            break;
        }
    }
    res.params = p;
    res.residual_norm = std::sqrt(cost);
    res.sigma.assign(n, std::numeric_limits<double>::quiet_NaN());
    const int dof = static_cast<int>(x.size()) - n;
    if (dof > 0) {
        Eigen::MatrixXd j = jacobian(model, x, p);
        Eigen::MatrixXd jtj = j.transpose() * j;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(jtj);
        if (lu.isInvertible()) {
            Eigen::MatrixXd cov = lu.inverse() * (cost / dof);
            for (int k = 0; k < n; ++k) {
                res.sigma[k] = std::sqrt(std::max(cov(k, k), 0.0));
            }
        }
    }
    if (!res.converged) {
        res.message = "iteration limit reached";
    }
    return res;
}

DecayFit fit_decay(const std::vector<double> &lengths, const std::vector<double> &survival,
                   const double *fixed_offset) {
    check_series(lengths, survival, fixed_offset ? 2 : 3, "fit_decay");
    const double b0 = fixed_offset ? *fixed_offset : std::min(*std::min_element(survival.begin(), survival.end()), 0.25);
    // Log-linear start on the points that sit clearly above the offset.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t k = 0; k < lengths.size(); ++k) {
        double v = survival[k] - b0;
        if (v > 1e-6) {
            double ly = std::log(v);
            sx += lengths[k];
            sy += ly;
            sxx += lengths[k] * lengths[k];
            sxy += lengths[k] * ly;
            ++m;
        }
    }
    double slope = -1e-3;
    double icpt = std::log(std::max(survival.front() - b0, 1e-3));
    if (m >= 2 && m * sxx - sx * sx > 0) {
        slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        icpt = (sy - slope * sx) / m;
    }
    double f0 = std::clamp(std::exp(slope), 0.5, 1.0 - 1e-9);
    double a0 = std::exp(icpt);
    DecayFit out;
    FitResult r;
    if (fixed_offset) {
        const double b = *fixed_offset;
        r = levenberg_marquardt([b](double n, const std::vector<double> &p) { return p[0] * std::pow(p[1], n) + b; },
                                lengths, survival, {a0, f0});
        out.b = b;
    } else {
        r = levenberg_marquardt(
            [](double n, const std::vector<double> &p) { return p[0] * std::pow(p[1], n) + p[2]; }, lengths,
            survival, {a0, f0, b0});
        out.b = r.params[2];
        out.sigma_b = r.sigma[2];
    }
    if (!std::isfinite(r.residual_norm) || !(r.params[1] > 0.0)) {
        throw FitError("fit_decay did not converge", r.residual_norm);
    }
    out.a = r.params[0];
    out.f = r.params[1];
    out.sigma_a = r.sigma[0];
    out.sigma_f = r.sigma[1];
    out.residual_norm = r.residual_norm;
    return out;
}

double ramsey_model(double t, double amplitude, double omega, double phase, double offset, double t2_star) {
    double decay = std::isinf(t2_star) ? 1.0 : std::exp(-std::pow(t / t2_star, 2));
    return amplitude * std::sin(omega * t + phase) * decay + offset;
}

namespace {

/// Frequency with the largest least-squares sinusoid amplitude on a grid.
double dominant_omega(const std::vector<double> &t, const std::vector<double> &p, double mean) {
    double span = *std::max_element(t.begin(), t.end()) - *std::min_element(t.begin(), t.end());
    double dt = span / std::max<std::size_t>(t.size() - 1, 1);
    double w_max = kPi / std::max(dt, 1e-300);
    double w_min = kPi / std::max(span, 1e-300);
    double best_w = w_min;
    double best_power = -1.0;
    const int grid = 400;
    for (int k = 0; k <= grid; ++k) {
        double w = w_min + (w_max - w_min) * k / grid;
        double s = 0, c = 0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            s += (p[i] - mean) * std::sin(w * t[i]);
            c += (p[i] - mean) * std::cos(w * t[i]);
        }
        double power = s * s + c * c;
        if (power > best_power) {
            best_power = power;
            best_w = w;
        }
    }
    return best_w;
}

}  // namespace

RamseyFit fit_ramsey(const std::vector<double> &t, const std::vector<double> &p) {
    check_series(t, p, 5, "fit_ramsey");
    double mean = 0;
    for (double v : p) {
        mean += v;
    }
    mean /= p.size();
    double amp = 0.5 * (*std::max_element(p.begin(), p.end()) - *std::min_element(p.begin(), p.end()));
    double span = *std::max_element(t.begin(), t.end());
    double w0 = dominant_omega(t, p, mean);
    // Decay is parametrized by its rate lambda = 1 / T2* so that "no decay" is
    // the interior point lambda = 0.
    ModelFn model = [](double x, const std::vector<double> &q) {
        return q[0] * std::sin(q[1] * x + q[2]) * std::exp(-std::pow(q[4] * x, 2)) + q[3];
    };
    FitResult best;
    best.residual_norm = std::numeric_limits<double>::infinity();
    for (double wscale : {1.0, 0.97, 1.03}) {
        for (double phase : {0.0, kPi / 2, kPi, -kPi / 2}) {
            for (double tscale : {0.3, 1.0, 3.0}) {
                FitResult r = levenberg_marquardt(model, t, p, {amp, w0 * wscale, phase, mean, 1.0 / (tscale * span)});
                if (std::isfinite(r.residual_norm) && r.residual_norm < best.residual_norm) {
                    best = r;
                }
            }
        }
    }
    if (!std::isfinite(best.residual_norm)) {
        throw FitError("fit_ramsey did not converge", best.residual_norm);
    }
    RamseyFit out;
    double a = best.params[0];
    double phase = best.params[2];
    if (a < 0) {
        a = -a;
        phase += kPi;
    }
    double w = best.params[1];
    if (w < 0) {
        w = -w;
        phase = kPi - phase;
    }
    out.amplitude = a;
    out.omega = w;
    out.phase = std::remainder(phase, 2 * kPi);
    out.offset = best.params[3];
    double lambda = std::abs(best.params[4]);
    out.t2_star = lambda > 0 ? 1.0 / lambda : std::numeric_limits<double>::infinity();
    out.sigma_amplitude = best.sigma[0];
    out.sigma_omega = best.sigma[1];
    out.sigma_phase = best.sigma[2];
    out.sigma_offset = best.sigma[3];
    out.sigma_t2_star = lambda > 0 ? best.sigma[4] / (lambda * lambda) : std::numeric_limits<double>::infinity();
    out.residual_norm = best.residual_norm;
    return out;
}

RabiFit fit_rabi(const std::vector<double> &t, const std::vector<double> &p) {
    check_series(t, p, 4, "fit_rabi");
    double mean = 0;
    for (double v : p) {
        mean += v;
    }
    mean /= p.size();
    double amp = 0.5 * (*std::max_element(p.begin(), p.end()) - *std::min_element(p.begin(), p.end()));
    double w0 = dominant_omega(t, p, mean);
    ModelFn model = [](double x, const std::vector<double> &q) { return q[0] * std::sin(q[1] * x + q[2]) + q[3]; };
    FitResult best;
    best.residual_norm = std::numeric_limits<double>::infinity();
    for (double wscale : {1.0, 0.97, 1.03}) {
        for (double phase : {0.0, kPi / 2, kPi, -kPi / 2}) {
            FitResult r = levenberg_marquardt(model, t, p, {amp, w0 * wscale, phase, mean});
            if (std::isfinite(r.residual_norm) && r.residual_norm < best.residual_norm) {
                best = r;
            }
        }
    }
    if (!std::isfinite(best.residual_norm)) {
        throw FitError("fit_rabi did not converge", best.residual_norm);
    }
    RabiFit out;
    double a = best.params[0];
    double phase = best.params[2];
    if (a < 0) {
        a = -a;
        phase += kPi;
    }
    out.amplitude = a;
    out.omega = std::abs(best.params[1]);
    out.phase = std::remainder(best.params[1] < 0 ? kPi - phase : phase, 2 * kPi);
    out.offset = best.params[3];
    out.sigma_amplitude = best.sigma[0];
    out.sigma_omega = best.sigma[1];
    out.sigma_phase = best.sigma[2];
    out.sigma_offset = best.sigma[3];
    out.residual_norm = best.residual_norm;
    return out;
}

}  // namespace spinreg
