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

#include "spinreg/ramsey.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spinreg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

PulseSpec drive(const Device &device, int qubit, NuclearConfig config, double angle, double phase) {
    PulseSpec p = qubit == 0 ? esr_rotation(device, config, Axis::X, angle)
                             : nmr_pulse(device, qubit, Spin::Down, Axis::X, angle);
    p.phase = phase;
    return p;
}

PureState initial(int qubit, NuclearConfig config) {
    PureState psi;
    if (qubit == 0) {
        psi = PureState::basis(config.bits());
    }
    return psi;
}

double prob_up(const PureState &psi, int qubit) {
    const int mask = 1 << bit_position(qubit);
    double p = 0.0;
    for (int k = 0; k < kRegisterDim; ++k) {
        if (k & mask) {
            p += psi.probability(k);
        }
    }
    return p;
}

template <typename Build>
Curve average(const Device &device, const NoiseParams &noise, int qubit, const std::vector<double> &times,
              const RamseyOptions &options, Build build) {
    if (qubit < 0 || qubit > kNumNuclei) {
        throw std::invalid_argument("ramsey: qubit must be 0 (electron) or 1..3");
    }
    if (options.noise_samples < 1) {
        throw std::invalid_argument("ramsey: need at least one noise sample");
    }
    const int k = noise.enabled() ? options.noise_samples : 1;
    std::vector<NoiseSample> samples;
    Rng rng(options.seed);
    for (int i = 0; i < k; ++i) {
        samples.push_back(sample_noise(noise, rng));
    }
    Curve c;
    c.t = times;
    for (double t : times) {
        if (t < 0.0) {
            throw std::invalid_argument("ramsey: negative delay");
        }
        GateSchedule s = build(t);
        double p = 0.0;
        for (const auto &sample : samples) {
            PureState psi = initial(qubit, options.electron_config);
            run_schedule(device, psi, s, sample);
            p += prob_up(psi, qubit);
        }
        c.p_up.push_back(p / k);
    }
    return c;
}

}  // namespace

Curve simulate_ramsey(const Device &device, const NoiseParams &noise, int qubit, const std::vector<double> &times,
                      const RamseyOptions &options) {
    const NuclearConfig cfg = options.electron_config;
    return average(device, noise, qubit, times, options, [&](double t) {
        GateSchedule s;
        s.name = "ramsey";
        s.then(drive(device, qubit, cfg, std::numbers::pi / 2, 0.0));
        s.then(IdleSegment{t});
        s.then(drive(device, qubit, cfg, std::numbers::pi / 2, kTwoPi * options.detuning_hz * t));
        return s;
    });
}

Curve simulate_rabi(const Device &device, const NoiseParams &noise, int qubit, const std::vector<double> &times,
                    const RamseyOptions &options) {
    const NuclearConfig cfg = options.electron_config;
    return average(device, noise, qubit, times, options, [&](double t) {
        GateSchedule s;
        s.name = "rabi";
        PulseSpec p = drive(device, qubit, cfg, std::numbers::pi, 0.0);
        p.duration = t;
        if (t > 0.0) {
            s.then(p);
        }
        return s;
    });
}

std::vector<double> linspace(double start, double stop, int count) {
    if (count < 2) {
        throw std::invalid_argument("linspace: need at least two points");
    }
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) {
        out[i] = start + (stop - start) * i / (count - 1);
    }
    return out;
}

}  // namespace spinreg
