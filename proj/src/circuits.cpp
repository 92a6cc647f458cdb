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

#include "spinreg/circuits.hpp"

#include <cmath>
#include <stdexcept>

#include "spinreg/grover.hpp"

namespace spinreg {

namespace {

constexpr double kPi = std::numbers::pi;

void check_pair(int i, int j) {
    if (i == j || i < 1 || j < 1 || i > kNumNuclei || j > kNumNuclei) {
        throw std::invalid_argument("need two distinct nuclei in 1..3");
    }
}

}  // namespace

const char *bell_name(BellState b) {
    switch (b) {
        case BellState::PhiPlus:
            return "phi-plus";
        case BellState::PhiMinus:
            return "phi-minus";
        case BellState::PsiPlus:
            return "psi-plus";
        case BellState::PsiMinus:
            return "psi-minus";
    }
    return "?";
}

BellState parse_bell(const std::string &name) {
    for (BellState b : {BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus, BellState::PsiMinus}) {
        if (name == bell_name(b)) {
            return b;
        }
    }
    throw std::invalid_argument("unknown Bell state: " + name);
}

GateSchedule nuclear_gate(const Device &device, int nucleus, Axis axis, double angle) {
    return nmr_rotation(device, nucleus, Spin::Down, axis, angle);
}

GateSchedule native_cnot(const Device &device, int control, int target) {
    check_pair(control, target);
    GateSchedule s;
    s.name = "cnot" + std::to_string(control) + std::to_string(target);
    s.then(nuclear_gate(device, target, Axis::MinusY, kPi / 2));
    s.then(geometric_cz(device, control, target));
    s.then(nuclear_gate(device, target, Axis::Y, kPi / 2));
    return s;
}

std::pair<bool, bool> bell_input(BellState state) {
    switch (state) {
        case BellState::PhiPlus:
            return {true, true};
        case BellState::PhiMinus:
            return {false, true};
        case BellState::PsiPlus:
            return {true, false};
        case BellState::PsiMinus:
            return {false, false};
    }
    return {false, false};
}

GateSchedule bell_circuit(const Device &device, int i, int j, BellState state) {
    check_pair(i, j);
    auto [flip_i, flip_j] = bell_input(state);
    GateSchedule s;
    s.name = std::string("bell-") + bell_name(state) + "-" + std::to_string(i) + std::to_string(j);
    if (flip_i) {
        s.then(nuclear_gate(device, i, Axis::X, kPi));
    }
    if (flip_j) {
        s.then(nuclear_gate(device, j, Axis::X, kPi));
    }
    s.then(nuclear_gate(device, i, Axis::Y, kPi / 2));
    s.then(native_cnot(device, i, j));
    return s;
}

PureState bell_pair_state(BellState state) {
    const double r = 1.0 / std::sqrt(2.0);
    Vector a = Vector::Zero(4);
    switch (state) {
        case BellState::PhiPlus:
            a[0] = r;
            a[3] = r;
            break;
        case BellState::PhiMinus:
            a[0] = r;
            a[3] = -r;
            break;
        case BellState::PsiPlus:
            a[1] = r;
            a[2] = r;
            break;
        case BellState::PsiMinus:
            a[1] = r;
            a[2] = -r;
            break;
    }
    return PureState::from_amplitudes(a);
}

PureState bell_target(int i, int j, BellState state) {
    check_pair(i, j);
    PureState pair = bell_pair_state(state);
    Vector a = Vector::Zero(kRegisterDim);
    for (int k = 0; k < 4; ++k) {
        int bi = (k >> 1) & 1;
        int bj = k & 1;
        int index = (bi << bit_position(i)) | (bj << bit_position(j));
        a[index] = pair.amplitude(k);
    }
    return PureState::from_amplitudes(a);
}

GateSchedule ghz_circuit(const Device &device) {
    GateSchedule s;
    s.name = "ghz";
    for (int n = 1; n <= kNumNuclei; ++n) {
        s.then(nuclear_gate(device, n, Axis::X, kPi));
    }
    s.then(nuclear_gate(device, 1, Axis::MinusY, kPi / 2));
    s.then(native_cnot(device, 1, 2));
    s.then(native_cnot(device, 1, 3));
    return s;
}

PureState ghz_nuclear_state() {
    Vector a = Vector::Zero(8);
    a[0] = a[7] = 1.0 / std::sqrt(2.0);
    return PureState::from_amplitudes(a);
}

PureState ghz_target() {
    Vector a = Vector::Zero(kRegisterDim);
    a[0] = a[7] = 1.0 / std::sqrt(2.0);
    return PureState::from_amplitudes(a);
}

DensityOperator nuclear_density(const PureState &register_state, const std::vector<int> &nuclei) {
    return DensityOperator::from_pure(register_state).reduced(nuclei);
}

GateSchedule circuit_by_name(const Device &device, const std::string &name) {
    if (name == "ghz") {
        return ghz_circuit(device);
    }
    if (name == "grover") {
        GroverSpec spec;
        spec.marked = {NuclearConfig(0)};
        spec.iterations = 2;
        return build_grover_schedule(spec, device);
    }
    if (name.rfind("bell-", 0) == 0) {
        std::string rest = name.substr(5);
        int i = 1;
        int j = 2;
        if (rest.size() > 3 && rest[rest.size() - 3] == '-') {
            i = rest[rest.size() - 2] - '0';
            j = rest[rest.size() - 1] - '0';
            rest.resize(rest.size() - 3);
        }
        return bell_circuit(device, i, j, parse_bell(rest));
    }
    throw std::invalid_argument("unknown circuit: " + name);
}

TomographyTarget tomography_target(const std::string &name) {
    if (name == "ghz") {
        return {{1, 2, 3}, ghz_nuclear_state()};
    }
    if (name.rfind("bell-", 0) == 0) {
        std::string rest = name.substr(5);
        int i = 1;
        int j = 2;
        if (rest.size() > 3 && rest[rest.size() - 3] == '-') {
            i = rest[rest.size() - 2] - '0';
            j = rest[rest.size() - 1] - '0';
            rest.resize(rest.size() - 3);
        }
        return {{i, j}, bell_pair_state(parse_bell(rest))};
    }
    throw std::invalid_argument("no tomography target for circuit: " + name);
}

}  // namespace spinreg
