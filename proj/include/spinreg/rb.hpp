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

#ifndef SPINREG_RB_HPP
#define SPINREG_RB_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "spinreg/clifford.hpp"
#include "spinreg/fit.hpp"
#include "spinreg/noise.hpp"

namespace spinreg {

struct DecayCurve {
    std::vector<int> lengths;
    std::vector<double> survival;
    /// Standard error of the mean over variations.
    std::vector<double> sem;
    std::vector<int> samples;

    void validate() const;
};

void write_curve_csv(std::ostream &out, const DecayCurve &curve);

struct RbOptions {
    std::vector<int> lengths{1, 10, 25, 50, 100, 200, 350, 500};
    int variations = 30;
    /// Quasistatic noise draws averaged per sequence.
    int noise_samples = 10;
    std::uint64_t seed = 1;
    bool noise = true;
    /// Probability per physical gate of a uniformly random Pauli (including I)
    /// on the gate's qubit.
    double depolarizing = 0.0;
    int threads = 1;
    /// Nuclear configuration that conditions electron gates.
    NuclearConfig electron_config{0};
    LayerSchedule schedule = LayerSchedule::Alternate;
};

struct SingleQubitRbResult {
    DecayCurve curve;
    DecayFit fit;
    double clifford_fidelity = 0.0;
    double sigma_clifford = 0.0;
    double gate_fidelity = 0.0;
    double sigma_gate = 0.0;
    double gates_per_clifford = 0.0;
};

/// Converts a fitted decay to Clifford and physical-gate fidelities:
/// F_C = 1 - (1 - f) / 2 and F = 1 - (1 - F_C) / gates_per_clifford.
void single_qubit_fidelities(SingleQubitRbResult &r);

/// Single-qubit RB on qubit 0 (electron, conditioned on options.electron_config)
/// or on nucleus 1..3 (conditioned on the electron being down). Each sequence
/// is run twice, recovering to up and to down; P = (P_up + 1 - P_down) / 2 is
/// fit to a f^N + 0.5.
SingleQubitRbResult single_qubit_rb(const Device &device, const NoiseParams &noise, int qubit,
                                    const RbOptions &options, std::optional<int> interleave = std::nullopt);

struct TwoQubitRbResult {
    DecayCurve reference;
    DecayCurve interleaved;
    DecayFit fit_reference;
    DecayFit fit_interleaved;
    double reference_fidelity = 0.0;
    double interleaved_fidelity = 0.0;
    double cz_fidelity = 0.0;
    double sigma_cz = 0.0;
};

/// Two-qubit RB on nuclei (i, j) with the spectator and electron down. The
/// interleaved run inserts the native CZ after every Clifford. Fits a f^N + b;
/// F = 1 - 3 (1 - f) / 4 and F_CZ = 1 - 3 (1 - f_int / f_ref) / 4.
TwoQubitRbResult two_qubit_rb(const Device &device, const NoiseParams &noise, int i, int j, const RbOptions &options,
                              bool interleaved = true);

struct SequentialRbResult {
    std::array<SingleQubitRbResult, kNumNuclei> nuclei;
};

/// Three independent nuclear RB sequences run in one circuit, one physical
/// gate per nucleus in turn; exhausted sequences are skipped.
SequentialRbResult sequential_rb(const Device &device, const NoiseParams &noise, const RbOptions &options);

}  // namespace spinreg

#endif
