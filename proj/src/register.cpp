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

#include "spinreg/register.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spinreg {

namespace {

void check_nucleus(int n) {
    if (n < 1 || n > kNumNuclei) {
        throw std::invalid_argument("nucleus index must be 1, 2 or 3");
    }
}

double magnetic_number(Spin s) { return s == Spin::Down ? -0.5 : 0.5; }

}  // namespace

NuclearConfig NuclearConfig::parse(const std::string &text) {
    if (text.size() != 3) {
        throw std::invalid_argument("nuclear configuration must have three characters: " + text);
    }
    int bits = 0;
    for (char c : text) {
        bits <<= 1;
        if (c == '1' || c == 'u' || c == 'U') {
            bits |= 1;
        } else if (c != '0' && c != 'd' && c != 'D') {
            throw std::invalid_argument("nuclear configuration characters must be 0/1: " + text);
        }
    }
    return NuclearConfig(bits);
}

NuclearConfig NuclearConfig::from_spins(Spin n1, Spin n2, Spin n3) {
    return NuclearConfig((static_cast<int>(n1) << 2) | (static_cast<int>(n2) << 1) | static_cast<int>(n3));
}

Spin NuclearConfig::spin(int nucleus) const {
    check_nucleus(nucleus);
    return static_cast<Spin>((bits_ >> (kNumNuclei - nucleus)) & 1);
}

NuclearConfig NuclearConfig::with_spin(int nucleus, Spin s) const {
    check_nucleus(nucleus);
    int mask = 1 << (kNumNuclei - nucleus);
    return NuclearConfig(s == Spin::Up ? (bits_ | mask) : (bits_ & ~mask));
}

std::string NuclearConfig::to_string() const {
    std::string out;
    for (int n = 1; n <= kNumNuclei; ++n) {
        out.push_back(spin(n) == Spin::Up ? '1' : '0');
    }
    return out;
}

void RegisterParams::validate() const {
    if (!(b0_tesla > 0.0)) {
        throw std::invalid_argument("b0 must be positive");
    }
    if (!(gamma_e_hz_per_t > 0.0) || !(gamma_n_hz_per_t > 0.0)) {
        throw std::invalid_argument("gyromagnetic ratios must be positive");
    }
    for (double a : hyperfine_hz) {
        if (!(a > 0.0)) {
            throw std::invalid_argument("hyperfine couplings must be positive");
        }
    }
    double a_max = *std::max_element(hyperfine_hz.begin(), hyperfine_hz.end());
    if (gamma_e_hz_per_t * b0_tesla <= 10.0 * a_max) {
        throw std::invalid_argument("secular approximation invalid: gamma_e * b0 must exceed 10 * max(A)");
    }
}

double QubitCalibration::electron_f_rabi(NuclearConfig c) const {
    double f = electron_for(c).f_rabi_hz;
    return f > 0.0 ? f : electron_f_rabi_fallback_hz;
}

double QubitCalibration::mean_electron_f_rabi() const {
    double sum = 0.0;
    for (int c = 0; c < kNumConfigs; ++c) {
        sum += electron_f_rabi(NuclearConfig(c));
    }
    return sum / kNumConfigs;
}

double QubitCalibration::mean_electron_t2_star() const {
    double sum = 0.0;
    for (const auto &e : electron) {
        sum += e.t2_star_s;
    }
    return sum / kNumConfigs;
}

void QubitCalibration::validate() const {
    auto check = [](const QubitTiming &t, bool rabi_optional) {
        if (!(t.t2_star_s > 0.0)) {
            throw std::invalid_argument("calibration: T2* must be positive");
        }
        if (!rabi_optional && !(t.f_rabi_hz > 0.0)) {
            throw std::invalid_argument("calibration: Rabi frequency must be positive");
        }
        if (t.f_rabi_hz < 0.0) {
            throw std::invalid_argument("calibration: Rabi frequency must be positive");
        }
        if (t.t2_rabi_s && !(*t.t2_rabi_s > 0.0)) {
            throw std::invalid_argument("calibration: Rabi decay time must be positive");
        }
    };
    for (const auto &e : electron) {
        check(e, true);
    }
    for (const auto &n : nuclei) {
        check(n, false);
    }
    if (!(electron_f_rabi_fallback_hz > 0.0)) {
        throw std::invalid_argument("calibration: electron fallback Rabi frequency must be positive");
    }
}

QubitCalibration QubitCalibration::table_s3() {
    QubitCalibration cal;
    // Configuration order 000, 001, 010, 011, 100, 101, 110, 111.
    constexpr std::array<double, kNumConfigs> f_e{171.57e3, 170.67e3, 172.27e3, 172.01e3,
                                                  168.63e3, 171.04e3, 170.64e3, 171.29e3};
    constexpr std::array<double, kNumConfigs> t2_e{28.10e-6, 31.43e-6, 33.60e-6, 30.79e-6,
                                                   26.71e-6, 38.26e-6, 37.75e-6, 26.73e-6};
    for (int c = 0; c < kNumConfigs; ++c) {
        cal.electron[c] = {f_e[c], t2_e[c], std::nullopt};
    }
    cal.electron[0].t2_rabi_s = 0.191e-3;
    cal.nuclei[0] = {11.22e3, 1260e-6, 71.75e-3};
    cal.nuclei[1] = {24.16e3, 490e-6, 3.50e-3};
    cal.nuclei[2] = {31.44e3, 600e-6, 2.21e-3};
    return cal;
}

double esr_offset(const RegisterParams &params, NuclearConfig config) {
    if (!config.valid()) {
        throw std::invalid_argument("esr_offset: invalid configuration");
    }
    double sum = 0.0;
    for (int n = 1; n <= kNumNuclei; ++n) {
        sum += magnetic_number(config.spin(n)) * params.hyperfine_hz[n - 1];
    }
    return sum;
}

double nmr_frequency(const RegisterParams &params, int nucleus, Spin electron) {
    check_nucleus(nucleus);
    return std::abs(params.gamma_n_hz_per_t * params.b0_tesla +
                    magnetic_number(electron) * params.hyperfine_hz[nucleus - 1]);
}

TransitionTable transition_table(const RegisterParams &params) {
    TransitionTable table;
    for (int c = 0; c < kNumConfigs; ++c) {
        table.esr[c] = esr_offset(params, NuclearConfig(c));
    }
    for (int n = 1; n <= kNumNuclei; ++n) {
        for (Spin s : {Spin::Down, Spin::Up}) {
            table.nmr[{n, s}] = nmr_frequency(params, n, s);
        }
    }
    return table;
}

std::array<QualityFactors, 4> quality_factors(const QubitCalibration &cal) {
    std::array<QualityFactors, 4> out{};
    auto make = [](const QubitTiming &t, double f) {
        QualityFactors q;
        q.qubit = t.t2_star_s * f;
        if (t.t2_rabi_s) {
            q.gate = *t.t2_rabi_s * f;
        }
        return q;
    };
    out[0] = make(cal.electron_for(NuclearConfig(0)), cal.electron_f_rabi(NuclearConfig(0)));
    for (int n = 1; n <= kNumNuclei; ++n) {
        out[n] = make(cal.nucleus(n), cal.nucleus(n).f_rabi_hz);
    }
    return out;
}

}  // namespace spinreg
