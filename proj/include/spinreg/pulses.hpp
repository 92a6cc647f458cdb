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

#ifndef SPINREG_PULSES_HPP
#define SPINREG_PULSES_HPP

#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "spinreg/noise.hpp"
#include "spinreg/qstate.hpp"
#include "spinreg/random.hpp"
#include "spinreg/register.hpp"

namespace spinreg {

/// Rotation axis in the xy plane of the rotating frame. The drive phase is
/// 0 for +x, pi/2 for +y, pi for -x and -pi/2 for -y.
enum class Axis { X, Y, MinusX, MinusY };

double axis_phase(Axis axis);
Axis inverse_axis(Axis axis);
const char *axis_name(Axis axis);

struct EsrTransition {
    NuclearConfig config;
};

struct NmrTransition {
    int nucleus = 1;
    Spin electron = Spin::Down;
};

/// One resonant drive segment.
struct PulseSpec {
    std::variant<EsrTransition, NmrTransition> transition;
    double omega = 0.0;     ///< drive strength, rad/s
    double delta = 0.0;     ///< programmed detuning on top of the noise sample, rad/s
    double duration = 0.0;  ///< s
    double phase = 0.0;     ///< drive phase, rad
    std::string label;

    bool is_esr() const { return std::holds_alternative<EsrTransition>(transition); }
    int driven_qubit() const;
};

/// Free evolution. `qubits` lists who idles; every undriven qubit
/// accumulates its detuning phase regardless.
struct IdleSegment {
    double duration = 0.0;
    std::vector<int> qubits{0, 1, 2, 3};
};

/// Adiabatic electron inversion conditional on each listed configuration,
/// modelled as an ideal X that fails with `error_probability`.
struct ConditionalFlip {
    std::vector<NuclearConfig> configs;
    double duration = 0.0;
    double error_probability = 0.0;
};

/// Electron initialization into down.
struct ElectronReset {
    double duration = 0.0;
};

/// Projective QND measurement of the listed nuclei in the given order.
struct NuclearReadout {
    std::vector<int> order{2, 3, 1};
};

using Segment = std::variant<PulseSpec, IdleSegment, ConditionalFlip, ElectronReset, NuclearReadout>;

double segment_duration(const Segment &segment);

struct GateSchedule {
    std::string name;
    std::vector<Segment> segments;

    double total_duration() const;
    /// True when every segment is a pulse, an idle or an ideal flip.
    bool is_unitary() const;
    GateSchedule &then(const GateSchedule &other);
    GateSchedule &then(Segment segment);
    void validate() const;
};

/// I cos(Wt/2) + i (delta sz - omega s_phi) / W sin(Wt/2) with W = sqrt(delta^2 + omega^2)
/// and s_phi = cos(phase) sx + sin(phase) sy.
UnitaryOperator resonant_drive_unitary(double delta, double omega, double t, double phase = 0.0);

/// exp(i delta S_z t) with S_z = sz / 2.
UnitaryOperator frame_transform(double delta, double t);

/// Full-register unitary of a 2pi ESR pulse conditional on `config`, seen from
/// the interaction frame: U_trans^dagger(tau) U_d(tau) U_trans(0) on the
/// addressed {down, up} pair and identity on every other pair. tau = 1 / f_Rabi.
UnitaryOperator conditional_esr_2pi(const Device &device, NuclearConfig config, double delta);

/// ESR rotation of the electron conditional on a nuclear configuration.
PulseSpec esr_rotation(const Device &device, NuclearConfig config, Axis axis, double angle);

/// Geometric CZ on nuclei (i, j): two 2pi ESR pulses on the configurations with
/// both targets down and the spectator down, then up. The composite imprints
/// -1 on |down down> of the pair.
GateSchedule geometric_cz(const Device &device, int i, int j);

/// NMR rotation of `nucleus` conditional on the electron state.
GateSchedule nmr_rotation(const Device &device, int nucleus, Spin electron, Axis axis, double angle,
                          double delta = 0.0);
PulseSpec nmr_pulse(const Device &device, int nucleus, Spin electron, Axis axis, double angle);

struct SimulationOptions {
    /// Drive every ESR branch at its true detuning instead of treating the
    /// unaddressed branches as free evolution.
    bool exact_offresonant = false;
};

/// Outcomes recorded while simulating non-unitary segments.
struct TrajectoryLog {
    std::vector<NuclearConfig> readouts;
    int electron_resets_up = 0;
};

/// Applies one segment in place. The simulation frame rotates at the
/// calibrated transition frequencies, so a qubit whose true splitting is off
/// by delta precesses by delta during every segment. `rng` may be null only
/// for segments whose outcome is deterministic.
void apply_segment(const Device &device, PureState &state, const Segment &segment, const NoiseSample &noise,
                   Rng *rng = nullptr, TrajectoryLog *log = nullptr, const SimulationOptions &options = {});

void run_schedule(const Device &device, PureState &state, const GateSchedule &schedule, const NoiseSample &noise,
                  Rng *rng = nullptr, TrajectoryLog *log = nullptr, const SimulationOptions &options = {});

/// Ordered product of segment unitaries. Throws std::invalid_argument for
/// schedules containing resets or readouts.
UnitaryOperator schedule_unitary(const Device &device, const GateSchedule &schedule,
                                 const NoiseSample &noise = {}, const SimulationOptions &options = {});

nlohmann::json to_json(const GateSchedule &schedule);
GateSchedule schedule_from_json(const nlohmann::json &j);

}  // namespace spinreg

#endif
