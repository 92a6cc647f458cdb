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

#include "spinreg/qstate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace spinreg {

namespace {

int log2_exact(Eigen::Index dim, const char *what) {
    if (dim <= 0 || !std::has_single_bit(static_cast<std::uint64_t>(dim))) {
        throw std::invalid_argument(std::string(what) + ": dimension must be a power of two");
    }
    return std::countr_zero(static_cast<std::uint64_t>(dim));
}

std::vector<std::string> default_labels(int num_qubits) {
    if (num_qubits == kNumQubits) {
        return {"e", "n1", "n2", "n3"};
    }
    std::vector<std::string> out;
    for (int q = 0; q < num_qubits; ++q) {
        out.push_back("q" + std::to_string(q));
    }
    return out;
}

nlohmann::json complex_to_json(Complex c) { return nlohmann::json::array({c.real(), c.imag()}); }

Complex complex_from_json(const nlohmann::json &j) {
    if (!j.is_array() || j.size() != 2) {
        throw std::invalid_argument("complex entries must be [re, im] pairs");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

PureState::PureState() : PureState(kNumQubits) {}

PureState::PureState(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > kNumQubits) {
        throw std::invalid_argument("PureState: qubit count must be in 1..4");
    }
    amplitudes_ = Vector::Zero(Eigen::Index{1} << num_qubits);
    amplitudes_[0] = 1.0;
}

PureState PureState::from_amplitudes(Vector amplitudes) {
    int n = log2_exact(amplitudes.size(), "PureState");
    PureState out(n);
    if (std::abs(amplitudes.squaredNorm() - 1.0) > kNormTolerance) {
        throw std::invalid_argument("PureState: amplitudes are not normalized");
    }
    out.amplitudes_ = std::move(amplitudes);
    return out;
}

PureState PureState::basis(int index, int num_qubits) {
    PureState out(num_qubits);
    if (index < 0 || index >= out.dim()) {
        throw std::out_of_range("PureState::basis: index out of range");
    }
    out.amplitudes_.setZero();
    out.amplitudes_[index] = 1.0;
    return out;
}

std::vector<double> PureState::probabilities() const {
    std::vector<double> p(amplitudes_.size());
    for (Eigen::Index k = 0; k < amplitudes_.size(); ++k) {
        p[k] = std::norm(amplitudes_[k]);
    }
    return p;
}

void PureState::renormalize() {
    double n = amplitudes_.norm();
    if (n == 0.0) {
        throw std::domain_error("PureState: cannot renormalize a zero vector");
    }
    amplitudes_ /= n;
}

UnitaryOperator::UnitaryOperator(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) {
        throw std::invalid_argument("UnitaryOperator: matrix must be square");
    }
    log2_exact(m_.rows(), "UnitaryOperator");
    Matrix residual = m_.adjoint() * m_ - Matrix::Identity(m_.rows(), m_.cols());
    if (residual.cwiseAbs().maxCoeff() > kUnitaryTolerance) {
        throw std::invalid_argument("UnitaryOperator: matrix is not unitary");
    }
}

UnitaryOperator UnitaryOperator::identity(int dim) { return UnitaryOperator(Matrix::Identity(dim, dim)); }

int UnitaryOperator::num_qubits() const { return log2_exact(m_.rows(), "UnitaryOperator"); }

UnitaryOperator UnitaryOperator::adjoint() const { return UnitaryOperator(m_.adjoint()); }

UnitaryOperator UnitaryOperator::operator*(const UnitaryOperator &other) const {
    if (other.dim() != dim()) {
        throw std::invalid_argument("UnitaryOperator: dimension mismatch in product");
    }
    return UnitaryOperator(m_ * other.m_);
}

DensityOperator::DensityOperator(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) {
        throw std::invalid_argument("DensityOperator: matrix must be square");
    }
    log2_exact(m_.rows(), "DensityOperator");
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
        throw std::invalid_argument("DensityOperator: matrix is not Hermitian");
    }
    if (std::abs(m_.trace() - Complex(1.0)) > 1e-9) {
        throw std::invalid_argument("DensityOperator: trace is not 1");
    }
}

DensityOperator DensityOperator::from_pure(const PureState &psi) {
    return DensityOperator(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityOperator DensityOperator::maximally_mixed(int num_qubits) {
    Eigen::Index d = Eigen::Index{1} << num_qubits;
    return DensityOperator(Matrix::Identity(d, d) / static_cast<double>(d));
}

int DensityOperator::num_qubits() const { return log2_exact(m_.rows(), "DensityOperator"); }

Eigen::VectorXd DensityOperator::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m_);
    return solver.eigenvalues();
}

DensityOperator DensityOperator::reduced(std::span<const int> keep) const {
    int n = num_qubits();
    int k = static_cast<int>(keep.size());
    for (int q : keep) {
        if (q < 0 || q >= n) {
            throw std::invalid_argument("DensityOperator::reduced: qubit out of range");
        }
    }
    std::vector<int> traced;
    for (int q = 0; q < n; ++q) {
        if (std::find(keep.begin(), keep.end(), q) == keep.end()) {
            traced.push_back(q);
        }
    }
    auto compose = [&](int kept_index, int traced_index) {
        int full = 0;
        for (int i = 0; i < k; ++i) {
            if ((kept_index >> (k - 1 - i)) & 1) {
                full |= 1 << bit_position(keep[i], n);
            }
        }
        int t = static_cast<int>(traced.size());
        for (int i = 0; i < t; ++i) {
            if ((traced_index >> (t - 1 - i)) & 1) {
                full |= 1 << bit_position(traced[i], n);
            }
        }
        return full;
    };
    int dk = 1 << k;
    int dt = 1 << traced.size();
    Matrix out = Matrix::Zero(dk, dk);
    for (int r = 0; r < dk; ++r) {
        for (int c = 0; c < dk; ++c) {
            Complex acc = 0.0;
            for (int t = 0; t < dt; ++t) {
                acc += m_(compose(r, t), compose(c, t));
            }
            out(r, c) = acc;
        }
    }
    return DensityOperator(out);
}

DensityOperator DensityOperator::project_physical() const {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m_);
    Eigen::VectorXd lambda = solver.eigenvalues().cwiseMax(0.0);
    double total = lambda.sum();
    if (total <= 0.0) {
        throw std::domain_error("DensityOperator::project_physical: no positive spectrum");
    }
    lambda /= total;
    Matrix v = solver.eigenvectors();
    Matrix out = v * lambda.cast<Complex>().asDiagonal() * v.adjoint();
    out = 0.5 * (out + out.adjoint());
    return DensityOperator(out);
}

Matrix embed(const UnitaryOperator &u, std::span<const int> targets, int num_qubits) {
    int k = static_cast<int>(targets.size());
    if (u.dim() != (1 << k)) {
        throw std::invalid_argument("embed: unitary dimension does not match target count");
    }
    for (int i = 0; i < k; ++i) {
        if (targets[i] < 0 || targets[i] >= num_qubits) {
            throw std::invalid_argument("embed: target out of range");
        }
        for (int j = 0; j < i; ++j) {
            if (targets[i] == targets[j]) {
                throw std::invalid_argument("embed: targets must be distinct");
            }
        }
    }
    int dim = 1 << num_qubits;
    int target_mask = 0;
    for (int q : targets) {
        target_mask |= 1 << bit_position(q, num_qubits);
    }
    auto local_index = [&](int full) {
        int idx = 0;
        for (int i = 0; i < k; ++i) {
            idx = (idx << 1) | ((full >> bit_position(targets[i], num_qubits)) & 1);
        }
        return idx;
    };
    Matrix out = Matrix::Zero(dim, dim);
    const Matrix &m = u.matrix();
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            if ((r & ~target_mask) != (c & ~target_mask)) {
                continue;
            }
            out(r, c) = m(local_index(r), local_index(c));
        }
    }
    return out;
}

PureState apply_unitary(const PureState &state, const UnitaryOperator &u, std::span<const int> targets) {
    Matrix full = embed(u, targets, state.num_qubits());
    PureState out = state;
    out.mutable_amplitudes() = full * state.amplitudes();
    return out;
}

double state_fidelity(const DensityOperator &rho, const PureState &target) {
    if (rho.dim() != target.dim()) {
        throw std::invalid_argument("state_fidelity: dimension mismatch");
    }
    const Vector &psi = target.amplitudes();
    double f = (psi.adjoint() * rho.matrix() * psi)(0, 0).real();
    return std::clamp(f, 0.0, 1.0 + 1e-9);
}

double unitary_fidelity(const UnitaryOperator &u, const UnitaryOperator &v) {
    if (u.dim() != v.dim()) {
        throw std::invalid_argument("unitary_fidelity: dimension mismatch");
    }
    double d = u.dim();
    return std::norm((u.matrix().adjoint() * v.matrix()).trace()) / (d * d);
}

double trace_distance(const DensityOperator &a, const DensityOperator &b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("trace_distance: dimension mismatch");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix() - b.matrix(), Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

std::vector<std::uint64_t> sample_measurement(const PureState &state, std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) {
        throw std::invalid_argument("sample_measurement: shots must be >= 1");
    }
    std::mt19937_64 rng(seed);
    std::vector<double> p = state.probabilities();
    std::vector<std::uint64_t> counts(p.size(), 0);
    // Sequential conditional binomials give an exact multinomial draw.
    std::uint64_t remaining = shots;
    double mass = 1.0;
    for (std::size_t k = 0; k + 1 < p.size() && remaining > 0; ++k) {
        double q = mass > 0.0 ? std::clamp(p[k] / mass, 0.0, 1.0) : 0.0;
        std::binomial_distribution<std::uint64_t> draw(remaining, q);
        counts[k] = draw(rng);
        remaining -= counts[k];
        mass -= p[k];
    }
    counts.back() += remaining;
    return counts;
}

namespace pauli {

Matrix identity() { return Matrix::Identity(2, 2); }

Matrix x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix y() {
    Matrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

Matrix z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Matrix by_label(char label) {
    switch (label) {
        case 'I':
            return identity();
        case 'X':
            return x();
        case 'Y':
            return y();
        case 'Z':
            return z();
        default:
            throw std::invalid_argument(std::string("unknown Pauli label: ") + label);
    }
}

Matrix string(std::string_view labels) {
    Matrix out = Matrix::Identity(1, 1);
    for (char c : labels) {
        out = kron(out, by_label(c));
    }
    return out;
}

}  // namespace pauli

Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

double phase_aligned_distance(const Matrix &a, const Matrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("phase_aligned_distance: shape mismatch");
    }
    Complex overlap = (a.adjoint() * b).trace();
    Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
    Eigen::JacobiSVD<Matrix> svd(phase * a - b);
    return svd.singularValues()(0);
}

nlohmann::json to_json(const PureState &state, std::vector<std::string> labels) {
    if (labels.empty()) {
        labels = default_labels(state.num_qubits());
    }
    nlohmann::json amps = nlohmann::json::array();
    for (int k = 0; k < state.dim(); ++k) {
        amps.push_back(complex_to_json(state.amplitude(k)));
    }
    return {{"basis_order", labels}, {"dim", state.dim()}, {"amplitudes", amps}};
}

nlohmann::json to_json(const DensityOperator &rho, std::vector<std::string> labels) {
    if (labels.empty()) {
        labels = default_labels(rho.num_qubits());
    }
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < rho.dim(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < rho.dim(); ++c) {
            row.push_back(complex_to_json(rho.matrix()(r, c)));
        }
        rows.push_back(row);
    }
    return {{"basis_order", labels}, {"dim", rho.dim()}, {"matrix", rows}};
}

PureState pure_state_from_json(const nlohmann::json &j) {
    if (!j.contains("basis_order")) {
        throw std::invalid_argument("state JSON requires a basis_order field");
    }
    const auto &amps = j.at("amplitudes");
    Vector v(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t k = 0; k < amps.size(); ++k) {
        v[static_cast<Eigen::Index>(k)] = complex_from_json(amps[k]);
    }
    if (j.at("basis_order").size() != static_cast<std::size_t>(log2_exact(v.size(), "PureState"))) {
        throw std::invalid_argument("state JSON basis_order does not match dimension");
    }
    return PureState::from_amplitudes(std::move(v));
}

DensityOperator density_from_json(const nlohmann::json &j) {
    if (!j.contains("basis_order")) {
        throw std::invalid_argument("density JSON requires a basis_order field");
    }
    const auto &rows = j.at("matrix");
    auto d = static_cast<Eigen::Index>(rows.size());
    Matrix m(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
        if (rows[r].size() != rows.size()) {
            throw std::invalid_argument("density JSON matrix must be square");
        }
        for (Eigen::Index c = 0; c < d; ++c) {
            m(r, c) = complex_from_json(rows[r][c]);
        }
    }
    if (j.at("basis_order").size() != static_cast<std::size_t>(log2_exact(d, "DensityOperator"))) {
        throw std::invalid_argument("density JSON basis_order does not match dimension");
    }
    return DensityOperator(std::move(m));
}

}  // namespace spinreg
