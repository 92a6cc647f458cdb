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

#ifndef SPINREG_RAMSEY_HPP
#define SPINREG_RAMSEY_HPP

#include <cstdint>
#include <vector>

#include "spinreg/noise.hpp"
#include "spinreg/pulses.hpp"

namespace spinreg {

struct RamseyOptions {
    /// Virtual detuning added through the phase of the second pulse, Hz.
    double detuning_hz = 0.0;
    int noise_samples = 400;
    std::uint64_t seed = 1;
    /// Nuclear configuration for electron experiments; ignored for nuclei.
    NuclearConfig electron_config{};
};

struct Curve {
    std::vector<double> t;
    std::vector<double> p_up;
};

/// X90, free evolution for t, X90 with phase 2 pi detuning t. The same noise
/// samples are reused at every delay. Qubit 0 is the electron.
Curve simulate_ramsey(const Device &device, const NoiseParams &noise, int qubit, const std::vector<double> &times,
                      const RamseyOptions &options);

/// Resonant drive for time t, averaged over quasistatic detunings.
Curve simulate_rabi(const Device &device, const NoiseParams &noise, int qubit, const std::vector<double> &times,
                    const RamseyOptions &options);

std::vector<double> linspace(double start, double stop, int count);

}  // namespace spinreg

#endif
