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

#ifndef SPINREG_NOISE_HPP
#define SPINREG_NOISE_HPP

#include <array>
#include <cstdint>
#include <limits>

#include "spinreg/qstate.hpp"
#include "spinreg/random.hpp"
#include "spinreg/register.hpp"

namespace spinreg {

inline constexpr double kInfiniteT2 = std::numeric_limits<double>::infinity();

/// Quasistatic detunings (rad/s) held fixed for one circuit repetition.
///
/// The electron has one detuning per nuclear configuration because each ESR
/// transition has its own measured T2*. They share a single standard-normal
/// draw, so the electron splitting noise is one common fluctuation scaled per
/// branch.
struct NoiseSample {
    std::array<double, kNumConfigs> delta_e{};
    std::array<double, kNumNuclei> delta_n{};
    std::uint64_t seed = 0;

    double electron(NuclearConfig c) const { return delta_e.at(c.bits()); }
    double nucleus(int n) const { return delta_n.at(n - 1); }
    bool is_zero() const;
};

struct NoiseParams {
    std::array<double, kNumConfigs> t2_star_e;
    std::array<double, kNumNuclei> t2_star_n;

    /// Every T2* infinite: all samples are exactly zero.
    static NoiseParams off();
    static NoiseParams from_calibration(const QubitCalibration &cal);
    bool enabled() const;
    void validate() const;
};

/// sqrt(Var(delta)) = sqrt(2) / T2*; zero for infinite T2*.
double detuning_std(double t2_star_s);

/// Gaussian detuning with mean 0 and variance 2 / T2*^2.
double sample_detuning(double t2_star_s, Rng &rng);

NoiseSample sample_noise(const NoiseParams &params, Rng &rng);

/// (3/32) (tau / T2*)^2, the mean infidelity of a conditional 2pi pulse
/// under quasistatic detuning. Logs a warning when tau is not small
/// compared to T2*.
double expected_cz_error(double tau_s, double t2_star_s);

/// exp(-(tau / T2*)^2).
double idle_fidelity(double tau_s, double t2_star_s);

/// Phase exp(+i delta tau / 2) on the qubit's down branch and
/// exp(-i delta tau / 2) on its up branch.
PureState apply_idle_phase(const PureState &state, int qubit, double tau_s, double delta);

}  // namespace spinreg

#endif
