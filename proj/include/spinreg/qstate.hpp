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

#ifndef SPINREG_QSTATE_HPP
#define SPINREG_QSTATE_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace spinreg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Register layout. Qubit 0 is the electron, qubits 1..3 are the nuclei.
/// Basis index = e*8 + n1*4 + n2*2 + n3 with down = 0 and up = 1, so the
/// electron-down half of the register is the contiguous block 0..7.
inline constexpr int kNumQubits = 4;
inline constexpr int kRegisterDim = 16;
inline constexpr int kElectron = 0;

/// Bit position of `qubit` inside a basis index of an n-qubit space.
constexpr int bit_position(int qubit, int num_qubits = kNumQubits) { return num_qubits - 1 - qubit; }

inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr double kNormTolerance = 1e-10;

/// Normalized state vector over 2^k basis states (k = 1..4). The default
/// instance is the 16-amplitude register in |down, down down down>.
class PureState {
   public:
    PureState();
    explicit PureState(int num_qubits);

    /// Throws std::invalid_argument unless the amplitudes have unit norm.
    static PureState from_amplitudes(Vector amplitudes);
    static PureState basis(int index, int num_qubits = kNumQubits);

    int num_qubits() const { return num_qubits_; }
    int dim() const { return static_cast<int>(amplitudes_.size()); }
    const Vector &amplitudes() const { return amplitudes_; }
    Complex amplitude(int index) const { return amplitudes_[index]; }
    double probability(int index) const { return std::norm(amplitudes_[index]); }
    std::vector<double> probabilities() const;
    double norm_squared() const { return amplitudes_.squaredNorm(); }

    /// In-place access for simulators. Callers must keep the norm invariant.
    Vector &mutable_amplitudes() { return amplitudes_; }
    void renormalize();

   private:
    int num_qubits_;
    Vector amplitudes_;
};

class UnitaryOperator {
   public:
    /// Throws std::invalid_argument if `m` is not square with power-of-two
    /// dimension or fails U^dagger U = I within kUnitaryTolerance.
    explicit UnitaryOperator(Matrix m);
    static UnitaryOperator identity(int dim);

    int dim() const { return static_cast<int>(m_.rows()); }
    int num_qubits() const;
    const Matrix &matrix() const { return m_; }
    UnitaryOperator adjoint() const;
    UnitaryOperator operator*(const UnitaryOperator &other) const;

   private:
    Matrix m_;
};

class DensityOperator {
   public:
    /// Throws std::invalid_argument unless Hermitian (1e-10) with unit trace (1e-9).
    explicit DensityOperator(Matrix m);
    static DensityOperator from_pure(const PureState &psi);
    static DensityOperator maximally_mixed(int num_qubits);

    int dim() const { return static_cast<int>(m_.rows()); }
    int num_qubits() const;
    const Matrix &matrix() const { return m_; }
    Eigen::VectorXd eigenvalues() const;

    /// Reduced operator on `keep` (indices in this operator's own qubit numbering).
    DensityOperator reduced(std::span<const int> keep) const;

    /// Clips negative eigenvalues to zero and renormalizes the trace.
    DensityOperator project_physical() const;

   private:
    Matrix m_;
};

/// Full-space operator equal to `u` acting on `targets` (targets[0] is the
/// most significant qubit of u's index) and identity elsewhere.
Matrix embed(const UnitaryOperator &u, std::span<const int> targets, int num_qubits = kNumQubits);

PureState apply_unitary(const PureState &state, const UnitaryOperator &u, std::span<const int> targets);

/// <psi|rho|psi>, clipped to [0, 1 + 1e-9].
double state_fidelity(const DensityOperator &rho, const PureState &target);

/// |tr(U^dagger V)|^2 / d^2.
double unitary_fidelity(const UnitaryOperator &u, const UnitaryOperator &v);

/// Trace distance 0.5 * ||a - b||_1.
double trace_distance(const DensityOperator &a, const DensityOperator &b);

/// Multinomial sample of computational-basis outcomes.
std::vector<std::uint64_t> sample_measurement(const PureState &state, std::uint64_t shots, std::uint64_t seed);

namespace pauli {
Matrix identity();
Matrix x();
Matrix y();
Matrix z();
/// Pauli by label 'I', 'X', 'Y' or 'Z'.
Matrix by_label(char label);
/// Tensor product of single-qubit Paulis, e.g. "XZ".
Matrix string(std::string_view labels);
}  // namespace pauli

Matrix kron(const Matrix &a, const Matrix &b);

/// Equality up to a global phase, measured in operator norm after aligning
/// the phase of the largest entry.
double phase_aligned_distance(const Matrix &a, const Matrix &b);

/// JSON document: {"basis_order": [...], "dim": d, "amplitudes"|"matrix": nested [re, im]}.
/// Empty `labels` selects "e n1 n2 n3" for the full register, q0.. otherwise.
nlohmann::json to_json(const PureState &state, std::vector<std::string> labels = {});
nlohmann::json to_json(const DensityOperator &rho, std::vector<std::string> labels = {});
PureState pure_state_from_json(const nlohmann::json &j);
DensityOperator density_from_json(const nlohmann::json &j);

}  // namespace spinreg

#endif
