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

#ifndef SPINREG_TOMOGRAPHY_HPP
#define SPINREG_TOMOGRAPHY_HPP

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "spinreg/noise.hpp"
#include "spinreg/pulses.hpp"
#include "spinreg/readout.hpp"

namespace spinreg {

enum class PauliBasis { X, Y, Z };

char basis_label(PauliBasis b);

struct TomographySettings {
    /// Measured nuclei; qubits[0] is the most significant bit of an outcome.
    std::vector<int> qubits;
    /// One basis per measured nucleus for every setting.
    std::vector<std::vector<PauliBasis>> settings;
    /// Basis-change rotations run in this order (slowest nucleus first).
    std::vector<int> rotation_order;
    std::vector<int> readout_order;

    int num_settings() const { return static_cast<int>(settings.size()); }
    int num_outcomes() const { return 1 << qubits.size(); }
    void validate() const;

    /// All 3^k Pauli settings with rotation order (3, 2, 1) and readout order
    /// (2, 3, 1) restricted to `qubits`.
    static TomographySettings full(std::vector<int> qubits);
};

/// X: R_{-y}(pi/2), Y: R_x(pi/2), Z: nothing; each conditional on the
/// electron being down.
GateSchedule basis_change(const Device &device, const TomographySettings &settings, int setting);

struct TomographyData {
    TomographySettings settings;
    /// counts[s][outcome]; may hold exact probabilities instead of counts.
    std::vector<std::vector<double>> counts;
};

/// Outcome probabilities of every setting for a register state.
TomographyData exact_tomography_data(const Device &device, const PureState &state,
                                     const TomographySettings &settings);

/// Pauli expectation values keyed by label over the measured qubits, e.g.
/// "XI", averaged over every setting that measures the non-identity factors.
std::map<std::string, double> pauli_expectations(const TomographyData &data);

/// rho = 2^-k sum_P <P> P from Pauli expectation values. The identity term is
/// fixed to one.
Matrix reconstruct_from_expectations(int num_qubits, const std::map<std::string, double> &expectations);

/// Linear inversion; Hermitian with unit trace but not necessarily positive.
Matrix linear_inversion(const TomographyData &data);

/// Closest density operator in Frobenius norm to a Hermitian matrix: negative
/// eigenvalues are zeroed and the deficit is taken evenly from the remaining
/// ones, which is the least-squares fit constrained to physical states.
DensityOperator nearest_physical(const Matrix &hermitian);

/// Constrained Gaussian least squares: the density operator closest to the
/// measured Pauli expectation values, each residual weighted by the inverse
/// of its binomial sample variance. When the linear inversion is already
/// positive it is returned unchanged.
DensityOperator reconstruct(const TomographyData &data);

struct QstOptions {
    std::uint64_t shots_per_setting = 10000;
    std::uint64_t seed = 1;
    bool noise = true;
    bool markov_readout = true;
    /// Postselect on a start-order verification readout reporting 000.
    bool verify_init = true;
    int bootstrap = 200;
    int threads = 1;
};

struct QstResult {
    DensityOperator rho = DensityOperator::maximally_mixed(1);
    Matrix raw;
    double fidelity = 0.0;
    double sigma = 0.0;
    /// True when the raw inversion had negative eigenvalues and rho was
    /// projected.
    bool projected = false;
    TomographyData data;
    std::uint64_t attempted = 0;
    std::uint64_t retained = 0;
};

/// Runs `circuit` from |down, 000> (after an optional verification readout),
/// changes basis, samples a nuclear
/// configuration and reads the measured nuclei through the Markov chain.
/// Rejected readouts are dropped. Fidelity is taken against `target`, a state
/// on the measured nuclei; sigma is the standard deviation over multinomial
/// bootstrap resamples of the counts.
QstResult qst(const Device &device, const GateSchedule &circuit, const TomographySettings &settings,
              const PureState &target, const NoiseParams &noise, const MarkovReadoutModel &model,
              const ReadoutPolicy &policy, const QstOptions &options);

void write_counts_csv(std::ostream &out, const TomographyData &data);

}  // namespace spinreg

#endif
