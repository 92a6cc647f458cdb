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

#ifndef SPINREG_FIT_HPP
#define SPINREG_FIT_HPP

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinreg {

using ModelFn = std::function<double(double x, const std::vector<double> &p)>;

struct FitResult {
    std::vector<double> params;
    /// sqrt(diag(s^2 (J^T J)^-1)) with s^2 the residual variance.
    std::vector<double> sigma;
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    std::string message;
};

struct FitOptions {
    int max_iterations = 500;
    double tolerance = 1e-12;
    double initial_lambda = 1e-3;
};

/// Damped Gauss-Newton with a central-difference Jacobian.
FitResult levenberg_marquardt(const ModelFn &model, const std::vector<double> &x, const std::vector<double> &y,
                              std::vector<double> p0, const FitOptions &options = {});

/// Thrown when no start point of a fit converges; carries the best residual.
class FitError : public std::runtime_error {
   public:
    FitError(const std::string &what, double residual) : std::runtime_error(what), residual_(residual) {}
    double residual() const { return residual_; }

   private:
    double residual_;
};

/// a f^N + b. With `fixed_offset` set, b is held at that value.
struct DecayFit {
    double a = 0.0, f = 0.0, b = 0.0;
    double sigma_a = 0.0, sigma_f = 0.0, sigma_b = 0.0;
    double residual_norm = 0.0;
};
DecayFit fit_decay(const std::vector<double> &lengths, const std::vector<double> &survival,
                   const double *fixed_offset = nullptr);

/// A sin(omega t + phi) exp(-(t / T2*)^2) + B.
struct RamseyFit {
    double amplitude = 0.0, omega = 0.0, phase = 0.0, offset = 0.0, t2_star = 0.0;
    double sigma_amplitude = 0.0, sigma_omega = 0.0, sigma_phase = 0.0, sigma_offset = 0.0, sigma_t2_star = 0.0;
    double residual_norm = 0.0;
};
double ramsey_model(double t, double amplitude, double omega, double phase, double offset, double t2_star);
RamseyFit fit_ramsey(const std::vector<double> &t, const std::vector<double> &p);

/// A sin(omega t + phi) + B.
struct RabiFit {
    double amplitude = 0.0, omega = 0.0, phase = 0.0, offset = 0.0;
    double sigma_amplitude = 0.0, sigma_omega = 0.0, sigma_phase = 0.0, sigma_offset = 0.0;
    double residual_norm = 0.0;
};
RabiFit fit_rabi(const std::vector<double> &t, const std::vector<double> &p);

}  // namespace spinreg

#endif
