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

#include "spinreg/noise.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace spinreg {

bool NoiseSample::is_zero() const {
    for (double d : delta_e) {
        if (d != 0.0) {
            return false;
        }
    }
    for (double d : delta_n) {
        if (d != 0.0) {
            return false;
        }
    }
    return true;
}

NoiseParams NoiseParams::off() {
    NoiseParams p;
    p.t2_star_e.fill(kInfiniteT2);
    p.t2_star_n.fill(kInfiniteT2);
    return p;
}

NoiseParams NoiseParams::from_calibration(const QubitCalibration &cal) {
    NoiseParams p;
    for (int c = 0; c < kNumConfigs; ++c) {
        p.t2_star_e[c] = cal.electron[c].t2_star_s;
    }
    for (int n = 0; n < kNumNuclei; ++n) {
        p.t2_star_n[n] = cal.nuclei[n].t2_star_s;
    }
    return p;
}

bool NoiseParams::enabled() const {
    for (double t : t2_star_e) {
        if (std::isfinite(t)) {
            return true;
        }
    }
    for (double t : t2_star_n) {
        if (std::isfinite(t)) {
            return true;
        }
    }
    return false;
}

void NoiseParams::validate() const {
    for (double t : t2_star_e) {
        if (!(t > 0.0)) {
            throw std::invalid_argument("noise: electron T2* must be positive");
        }
    }
    for (double t : t2_star_n) {
        if (!(t > 0.0)) {
            throw std::invalid_argument("noise: nuclear T2* must be positive");
        }
    }
}

double detuning_std(double t2_star_s) {
    if (!(t2_star_s > 0.0)) {
        throw std::invalid_argument("detuning_std: T2* must be positive");
    }
    if (std::isinf(t2_star_s)) {
        return 0.0;
    }
    return std::sqrt(2.0) / t2_star_s;
}

double sample_detuning(double t2_star_s, Rng &rng) {
    double sigma = detuning_std(t2_star_s);
    if (sigma == 0.0) {
        return 0.0;
    }
    return sigma * std::normal_distribution<double>(0.0, 1.0)(rng);
}

NoiseSample sample_noise(const NoiseParams &params, Rng &rng) {
    NoiseSample s;
    if (!params.enabled()) {
        return s;
    }
    std::normal_distribution<double> gauss(0.0, 1.0);
    double z_e = gauss(rng);
    for (int c = 0; c < kNumConfigs; ++c) {
        s.delta_e[c] = detuning_std(params.t2_star_e[c]) * z_e;
    }
    for (int n = 0; n < kNumNuclei; ++n) {
        s.delta_n[n] = detuning_std(params.t2_star_n[n]) * gauss(rng);
    }
    return s;
}

double expected_cz_error(double tau_s, double t2_star_s) {
    if (tau_s < 0.0 || !(t2_star_s > 0.0)) {
        throw std::invalid_argument("expected_cz_error: need tau >= 0 and T2* > 0");
    }
    if (tau_s > 0.5 * t2_star_s) {
        std::clog << "warning: expected_cz_error is a small-angle estimate; tau/T2* = " << tau_s / t2_star_s
                  << "\n";
    }
    double r = tau_s / t2_star_s;
    return 3.0 / 32.0 * r * r;
}

double idle_fidelity(double tau_s, double t2_star_s) {
    if (tau_s < 0.0 || !(t2_star_s > 0.0)) {
        throw std::invalid_argument("idle_fidelity: need tau >= 0 and T2* > 0");
    }
    double r = tau_s / t2_star_s;
    return std::exp(-r * r);
}

PureState apply_idle_phase(const PureState &state, int qubit, double tau_s, double delta) {
    if (qubit < 0 || qubit >= state.num_qubits()) {
        throw std::invalid_argument("apply_idle_phase: qubit out of range");
    }
    PureState out = state;
    Complex down = std::polar(1.0, 0.5 * delta * tau_s);
    Complex up = std::conj(down);
    int bit = bit_position(qubit, state.num_qubits());
    Vector &a = out.mutable_amplitudes();
    for (int k = 0; k < state.dim(); ++k) {
        a[k] *= ((k >> bit) & 1) ? up : down;
    }
    return out;
}

}  // namespace spinreg
