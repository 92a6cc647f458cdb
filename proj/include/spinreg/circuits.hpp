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

#ifndef SPINREG_CIRCUITS_HPP
#define SPINREG_CIRCUITS_HPP

#include <string>
#include <vector>

#include "spinreg/pulses.hpp"

namespace spinreg {

enum class BellState { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

const char *bell_name(BellState b);
BellState parse_bell(const std::string &name);

/// Nuclear rotation conditional on the electron being down.
GateSchedule nuclear_gate(const Device &device, int nucleus, Axis axis, double angle);

/// R_{-y}(pi/2) on the target, geometric CZ, R_y(pi/2) on the target. The
/// native CZ marks the both-down configuration, so this flips the target
/// when the control is down.
GateSchedule native_cnot(const Device &device, int control, int target);

/// Input flips, R_y(pi/2) on nucleus i, then native_cnot(i, j). The
/// spectator stays down.
GateSchedule bell_circuit(const Device &device, int i, int j, BellState state);

/// Which nuclei of the pair are flipped to up before the entangler.
std::pair<bool, bool> bell_input(BellState state);

/// Register state: electron down, spectator down, Bell state on (i, j).
PureState bell_target(int i, int j, BellState state);

/// All nuclei flipped up, R_{-y}(pi/2) on n1, then native_cnot(1, 2) and
/// native_cnot(1, 3).
GateSchedule ghz_circuit(const Device &device);

/// (|down down down> + |up up up>) / sqrt(2) with the electron down.
PureState ghz_target();

/// Reduced density operator of the listed nuclei (in the given order).
DensityOperator nuclear_density(const PureState &register_state, const std::vector<int> &nuclei);

/// Pure state on the listed nuclei, e.g. a Bell state on two qubits.
PureState bell_pair_state(BellState state);
PureState ghz_nuclear_state();

/// Circuit builders by name: "bell-phi-plus" (and the other three Bell
/// states, optionally suffixed with the pair, e.g. "bell-psi-minus-13"),
/// "ghz" and "grover" (marked 000, two iterations).
GateSchedule circuit_by_name(const Device &device, const std::string &name);

struct TomographyTarget {
    std::vector<int> qubits;
    PureState state;
};

/// Measured nuclei and ideal state for "ghz" and "bell-<state>[-ij]".
TomographyTarget tomography_target(const std::string &name);

}  // namespace spinreg

#endif
