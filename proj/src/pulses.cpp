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

#include "spinreg/pulses.hpp"

#include <cmath>
#include <stdexcept>

namespace spinreg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kElectronBit = 3;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Eigen::Matrix2cd drive_matrix(double delta, double omega, double t, double phase) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
    double w = std::hypot(delta, omega);
    if (w == 0.0 || t == 0.0) {
        return m;
    }
    double c = std::cos(0.5 * w * t);
    double s = std::sin(0.5 * w * t);
    const Complex i(0.0, 1.0);
    m(0, 0) = c + i * s * delta / w;
    m(1, 1) = c - i * s * delta / w;
    m(0, 1) = -i * s * omega / w * std::polar(1.0, -phase);
    m(1, 0) = -i * s * omega / w * std::polar(1.0, phase);
    return m;
}

/// Drive in a frame detuned by `offset` from the reference, mapped back into
/// the reference frame at the end of the pulse.
Eigen::Matrix2cd offset_drive(double noise_delta, double offset, double omega, double t, double phase) {
    Eigen::Matrix2cd m = drive_matrix(noise_delta + offset, omega, t, phase);
    if (offset != 0.0) {
        m.row(0) *= std::polar(1.0, -0.5 * offset * t);
        m.row(1) *= std::polar(1.0, 0.5 * offset * t);
    }
    return m;
}

void apply_pair(Vector &a, int i0, int i1, const Eigen::Matrix2cd &u) {
    Complex x0 = a[i0];
    Complex x1 = a[i1];
    a[i0] = u(0, 0) * x0 + u(0, 1) * x1;
    a[i1] = u(1, 0) * x0 + u(1, 1) * x1;
}

void nuclear_idle(Vector &a, int nucleus, double delta, double t) {
    if (delta == 0.0 || t == 0.0) {
        return;
    }
    Complex down = std::polar(1.0, 0.5 * delta * t);
    Complex up = std::conj(down);
    int bit = bit_position(nucleus);
    for (int k = 0; k < kRegisterDim; ++k) {
        a[k] *= ((k >> bit) & 1) ? up : down;
    }
}

// The electron phase is referenced to its down state: the electron-down
// block never picks up a configuration-dependent phase, and the up component
// of branch k precesses at that branch's own detuning.
void electron_idle(Vector &a, const NoiseSample &noise, double t) {
    if (t == 0.0) {
        return;
    }
    for (int k = 0; k < kNumConfigs; ++k) {
        if (noise.delta_e[k] != 0.0) {
            a[8 + k] *= std::polar(1.0, -noise.delta_e[k] * t);
        }
    }
}

void check_register(const PureState &state) {
    if (state.dim() != kRegisterDim) {
        throw std::invalid_argument("schedule simulation requires the 16-dimensional register state");
    }
}

void apply_pulse(const Device &device, Vector &a, const PulseSpec &p, const NoiseSample &noise,
                 const SimulationOptions &options) {
    const double t = p.duration;
    if (const auto *esr = std::get_if<EsrTransition>(&p.transition)) {
        const int target = esr->config.bits();
        for (int k = 0; k < kNumConfigs; ++k) {
            const double dk = noise.delta_e[k];
            if (k == target || options.exact_offresonant) {
                double offset = p.delta;
                if (k != target) {
                    offset += kTwoPi * (esr_offset(device.params, esr->config) -
                                        esr_offset(device.params, NuclearConfig(k)));
                }
                Eigen::Matrix2cd u = offset_drive(dk, offset, p.omega, t, p.phase) * std::polar(1.0, -0.5 * dk * t);
                apply_pair(a, k, 8 + k, u);
            } else if (dk != 0.0) {
                a[8 + k] *= std::polar(1.0, -dk * t);
            }
        }
        for (int n = 1; n <= kNumNuclei; ++n) {
            nuclear_idle(a, n, noise.nucleus(n), t);
        }
        return;
    }
    const auto &nmr = std::get<NmrTransition>(p.transition);
    const int bit = bit_position(nmr.nucleus);
    const double dn = noise.nucleus(nmr.nucleus);
    const Eigen::Matrix2cd driven = offset_drive(dn, p.delta, p.omega, t, p.phase);
    Eigen::Matrix2cd idle = Eigen::Matrix2cd::Zero();
    idle(0, 0) = std::polar(1.0, 0.5 * dn * t);
    idle(1, 1) = std::conj(idle(0, 0));
    // Split the electron phase around the nuclear rotation; the electron is
    // normally down during NMR, in which case both halves are trivial.
    electron_idle(a, noise, 0.5 * t);
    for (int k = 0; k < kRegisterDim; ++k) {
        if ((k >> bit) & 1) {
            continue;
        }
        Spin e = static_cast<Spin>((k >> kElectronBit) & 1);
        apply_pair(a, k, k | (1 << bit), e == nmr.electron ? driven : idle);
    }
    electron_idle(a, noise, 0.5 * t);
    for (int n = 1; n <= kNumNuclei; ++n) {
        if (n != nmr.nucleus) {
            nuclear_idle(a, n, noise.nucleus(n), t);
        }
    }
}

int sample_index(const std::vector<double> &weights, Rng *rng, const char *what) {
    double total = 0.0;
    for (double w : weights) {
        total += w;
    }
    if (rng == nullptr) {
        for (std::size_t k = 0; k < weights.size(); ++k) {
            if (weights[k] > total * (1.0 - 1e-12)) {
                return static_cast<int>(k);
            }
        }
        throw std::invalid_argument(std::string(what) + ": outcome is random but no RNG was supplied");
    }
    double r = uniform01(*rng) * total;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        r -= weights[k];
        if (r < 0.0) {
            return static_cast<int>(k);
        }
    }
    for (std::size_t k = weights.size(); k-- > 0;) {
        if (weights[k] > 0.0) {
            return static_cast<int>(k);
        }
    }
    return 0;
}

}  // namespace

double axis_phase(Axis axis) {
    switch (axis) {
        case Axis::X:
            return 0.0;
        case Axis::Y:
            return 0.5 * std::numbers::pi;
        case Axis::MinusX:
            return std::numbers::pi;
        case Axis::MinusY:
            return -0.5 * std::numbers::pi;
    }
    return 0.0;
}

Axis inverse_axis(Axis axis) {
    switch (axis) {
        case Axis::X:
            return Axis::MinusX;
        case Axis::Y:
            return Axis::MinusY;
        case Axis::MinusX:
            return Axis::X;
        case Axis::MinusY:
            return Axis::Y;
    }
    return axis;
}

const char *axis_name(Axis axis) {
    switch (axis) {
        case Axis::X:
            return "x";
        case Axis::Y:
            return "y";
        case Axis::MinusX:
            return "-x";
        case Axis::MinusY:
            return "-y";
    }
    return "?";
}

int PulseSpec::driven_qubit() const {
    if (const auto *nmr = std::get_if<NmrTransition>(&transition)) {
        return nmr->nucleus;
    }
    return kElectron;
}

double segment_duration(const Segment &segment) {
    return std::visit(Overloaded{[](const PulseSpec &p) { return p.duration; },
                                 [](const IdleSegment &s) { return s.duration; },
                                 [](const ConditionalFlip &s) { return s.duration; },
                                 [](const ElectronReset &s) { return s.duration; },
                                 [](const NuclearReadout &) { return 0.0; }},
                      segment);
}

double GateSchedule::total_duration() const {
    double total = 0.0;
    for (const auto &s : segments) {
        total += segment_duration(s);
    }
    return total;
}

bool GateSchedule::is_unitary() const {
    for (const auto &s : segments) {
        if (std::holds_alternative<ElectronReset>(s) || std::holds_alternative<NuclearReadout>(s)) {
            return false;
        }
    }
    return true;
}

GateSchedule &GateSchedule::then(const GateSchedule &other) {
    segments.insert(segments.end(), other.segments.begin(), other.segments.end());
    return *this;
}

GateSchedule &GateSchedule::then(Segment segment) {
    segments.push_back(std::move(segment));
    return *this;
}

void GateSchedule::validate() const {
    for (const auto &s : segments) {
        if (segment_duration(s) < 0.0) {
            throw std::invalid_argument("schedule: negative segment duration");
        }
        if (const auto *p = std::get_if<PulseSpec>(&s)) {
            if (p->omega < 0.0) {
                throw std::invalid_argument("schedule: negative drive strength");
            }
            if (const auto *nmr = std::get_if<NmrTransition>(&p->transition)) {
                if (nmr->nucleus < 1 || nmr->nucleus > kNumNuclei) {
                    throw std::invalid_argument("schedule: unknown nucleus");
                }
            } else if (!std::get<EsrTransition>(p->transition).config.valid()) {
                throw std::invalid_argument("schedule: invalid ESR configuration");
            }
        }
        if (const auto *f = std::get_if<ConditionalFlip>(&s)) {
            if (f->error_probability < 0.0 || f->error_probability > 1.0) {
                throw std::invalid_argument("schedule: flip error probability outside [0, 1]");
            }
        }
    }
}

UnitaryOperator resonant_drive_unitary(double delta, double omega, double t, double phase) {
    Eigen::Matrix2cd m = drive_matrix(delta, omega, t, phase);
    return UnitaryOperator(Matrix(m));
}

UnitaryOperator frame_transform(double delta, double t) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = std::polar(1.0, 0.5 * delta * t);
    m(1, 1) = std::polar(1.0, -0.5 * delta * t);
    return UnitaryOperator(m);
}

UnitaryOperator conditional_esr_2pi(const Device &device, NuclearConfig config, double delta) {
    if (!config.valid()) {
        throw std::invalid_argument("conditional_esr_2pi: invalid configuration");
    }
    double f = device.calibration.electron_f_rabi(config);
    double tau = 1.0 / f;
    UnitaryOperator pair = frame_transform(delta, tau).adjoint() * resonant_drive_unitary(delta, kTwoPi * f, tau) *
                           frame_transform(delta, 0.0);
    Matrix full = Matrix::Identity(kRegisterDim, kRegisterDim);
    int lo = config.bits();
    int hi = 8 + config.bits();
    full(lo, lo) = pair.matrix()(0, 0);
    full(lo, hi) = pair.matrix()(0, 1);
    full(hi, lo) = pair.matrix()(1, 0);
    full(hi, hi) = pair.matrix()(1, 1);
    return UnitaryOperator(full);
}

PulseSpec esr_rotation(const Device &device, NuclearConfig config, Axis axis, double angle) {
    if (angle < 0.0) {
        throw std::invalid_argument("esr_rotation: angle must be non-negative; use the axis for sign");
    }
    PulseSpec p;
    p.transition = EsrTransition{config};
    p.omega = kTwoPi * device.calibration.electron_f_rabi(config);
    p.duration = angle / p.omega;
    p.phase = axis_phase(axis);
    p.label = std::string("ESR[") + config.to_string() + "] R" + axis_name(axis);
    return p;
}

GateSchedule geometric_cz(const Device &device, int i, int j) {
    if (i == j || i < 1 || j < 1 || i > kNumNuclei || j > kNumNuclei) {
        throw std::invalid_argument("geometric_cz: need two distinct nuclei in 1..3");
    }
    int spectator = 6 - i - j;
    GateSchedule s;
    s.name = "cz" + std::to_string(i) + std::to_string(j);
    for (Spin spec : {Spin::Down, Spin::Up}) {
        NuclearConfig c = NuclearConfig(0).with_spin(spectator, spec);
        PulseSpec p = esr_rotation(device, c, Axis::X, kTwoPi);
        p.label = "CZ" + std::to_string(i) + std::to_string(j) + " ESR[" + c.to_string() + "] 2pi";
        s.segments.emplace_back(p);
    }
    return s;
}

PulseSpec nmr_pulse(const Device &device, int nucleus, Spin electron, Axis axis, double angle) {
    if (nucleus < 1 || nucleus > kNumNuclei) {
        throw std::invalid_argument("nmr_rotation: unknown nucleus");
    }
    if (angle < 0.0) {
        throw std::invalid_argument("nmr_rotation: angle must be non-negative; use the axis for sign");
    }
    PulseSpec p;
    p.transition = NmrTransition{nucleus, electron};
    p.omega = kTwoPi * device.calibration.nucleus(nucleus).f_rabi_hz;
    p.duration = angle / p.omega;
    p.phase = axis_phase(axis);
    p.label = "NMR[n" + std::to_string(nucleus) + (electron == Spin::Down ? "|e0" : "|e1") + "] R" +
              axis_name(axis);
    return p;
}

GateSchedule nmr_rotation(const Device &device, int nucleus, Spin electron, Axis axis, double angle, double delta) {
    PulseSpec p = nmr_pulse(device, nucleus, electron, axis, angle);
    p.delta = delta;
    GateSchedule s;
    s.name = p.label;
    s.segments.emplace_back(std::move(p));
    return s;
}

void apply_segment(const Device &device, PureState &state, const Segment &segment, const NoiseSample &noise,
                   Rng *rng, TrajectoryLog *log, const SimulationOptions &options) {
    check_register(state);
    Vector &a = state.mutable_amplitudes();
    std::visit(
        Overloaded{
            [&](const PulseSpec &p) { apply_pulse(device, a, p, noise, options); },
            [&](const IdleSegment &s) {
                electron_idle(a, noise, s.duration);
                for (int n = 1; n <= kNumNuclei; ++n) {
                    nuclear_idle(a, n, noise.nucleus(n), s.duration);
                }
            },
            [&](const ConditionalFlip &f) {
                for (NuclearConfig c : f.configs) {
                    if (rng != nullptr && bernoulli(*rng, f.error_probability)) {
                        continue;
                    }
                    std::swap(a[c.bits()], a[8 + c.bits()]);
                }
                for (int n = 1; n <= kNumNuclei; ++n) {
                    nuclear_idle(a, n, noise.nucleus(n), f.duration);
                }
            },
            [&](const ElectronReset &r) {
                double p_up = 0.0;
                for (int k = 0; k < kNumConfigs; ++k) {
                    p_up += std::norm(a[8 + k]);
                }
                bool up = sample_index({1.0 - p_up, p_up}, rng, "electron reset") == 1;
                for (int k = 0; k < kNumConfigs; ++k) {
                    if (up) {
                        a[k] = a[8 + k];
                    }
                    a[8 + k] = 0.0;
                }
                state.renormalize();
                if (up && log != nullptr) {
                    ++log->electron_resets_up;
                }
                for (int n = 1; n <= kNumNuclei; ++n) {
                    nuclear_idle(a, n, noise.nucleus(n), r.duration);
                }
            },
            [&](const NuclearReadout &r) {
                int mask = 0;
                for (int n : r.order) {
                    if (n < 1 || n > kNumNuclei) {
                        throw std::invalid_argument("readout: unknown nucleus");
                    }
                    mask |= 1 << bit_position(n);
                }
                std::vector<double> weights(kNumConfigs, 0.0);
                for (int k = 0; k < kRegisterDim; ++k) {
                    weights[k & 7 & mask] += std::norm(a[k]);
                }
                int outcome = sample_index(weights, rng, "nuclear readout");
                for (int k = 0; k < kRegisterDim; ++k) {
                    if ((k & 7 & mask) != outcome) {
                        a[k] = 0.0;
                    }
                }
                state.renormalize();
                if (log != nullptr) {
                    log->readouts.emplace_back(outcome);
                }
            }},
        segment);
}

void run_schedule(const Device &device, PureState &state, const GateSchedule &schedule, const NoiseSample &noise,
                  Rng *rng, TrajectoryLog *log, const SimulationOptions &options) {
    for (const auto &s : schedule.segments) {
        apply_segment(device, state, s, noise, rng, log, options);
    }
}

UnitaryOperator schedule_unitary(const Device &device, const GateSchedule &schedule, const NoiseSample &noise,
                                 const SimulationOptions &options) {
    if (!schedule.is_unitary()) {
        throw std::invalid_argument("schedule_unitary: schedule contains non-unitary segments");
    }
    Matrix u(kRegisterDim, kRegisterDim);
    for (int col = 0; col < kRegisterDim; ++col) {
        PureState psi = PureState::basis(col);
        run_schedule(device, psi, schedule, noise, nullptr, nullptr, options);
        u.col(col) = psi.amplitudes();
    }
    return UnitaryOperator(u);
}

nlohmann::json to_json(const GateSchedule &schedule) {
    nlohmann::json segs = nlohmann::json::array();
    for (const auto &s : schedule.segments) {
        segs.push_back(std::visit(
            Overloaded{[](const PulseSpec &p) {
                           nlohmann::json tr;
                           if (const auto *e = std::get_if<EsrTransition>(&p.transition)) {
                               tr = {{"kind", "esr"}, {"config", e->config.to_string()}};
                           } else {
                               const auto &n = std::get<NmrTransition>(p.transition);
                               tr = {{"kind", "nmr"},
                                     {"nucleus", n.nucleus},
                                     {"electron", n.electron == Spin::Down ? "down" : "up"}};
                           }
                           return nlohmann::json{{"type", "pulse"},     {"transition", tr},
                                                 {"omega", p.omega},    {"delta", p.delta},
                                                 {"duration", p.duration}, {"phase", p.phase},
                                                 {"label", p.label}};
                       },
                       [](const IdleSegment &i) {
                           return nlohmann::json{{"type", "idle"}, {"duration", i.duration}, {"qubits", i.qubits}};
                       },
                       [](const ConditionalFlip &f) {
                           std::vector<std::string> configs;
                           for (auto c : f.configs) {
                               configs.push_back(c.to_string());
                           }
                           return nlohmann::json{{"type", "flip"},
                                                 {"configs", configs},
                                                 {"duration", f.duration},
                                                 {"error_probability", f.error_probability}};
                       },
                       [](const ElectronReset &r) {
                           return nlohmann::json{{"type", "reset"}, {"duration", r.duration}};
                       },
                       [](const NuclearReadout &r) {
                           return nlohmann::json{{"type", "readout"}, {"order", r.order}};
                       }},
            s));
    }
    return {{"name", schedule.name}, {"total_duration", schedule.total_duration()}, {"segments", segs}};
}

GateSchedule schedule_from_json(const nlohmann::json &j) {
    GateSchedule s;
    s.name = j.value("name", "");
    for (const auto &seg : j.at("segments")) {
        const std::string type = seg.at("type").get<std::string>();
        if (type == "pulse") {
            PulseSpec p;
            const auto &tr = seg.at("transition");
            if (tr.at("kind") == "esr") {
                p.transition = EsrTransition{NuclearConfig::parse(tr.at("config").get<std::string>())};
            } else {
                p.transition = NmrTransition{tr.at("nucleus").get<int>(),
                                             tr.at("electron") == "up" ? Spin::Up : Spin::Down};
            }
            p.omega = seg.at("omega").get<double>();
            p.delta = seg.value("delta", 0.0);
            p.duration = seg.at("duration").get<double>();
            p.phase = seg.value("phase", 0.0);
            p.label = seg.value("label", "");
            s.segments.emplace_back(std::move(p));
        } else if (type == "idle") {
            IdleSegment i;
            i.duration = seg.at("duration").get<double>();
            if (seg.contains("qubits")) {
                i.qubits = seg.at("qubits").get<std::vector<int>>();
            }
            s.segments.emplace_back(std::move(i));
        } else if (type == "flip") {
            ConditionalFlip f;
            for (const auto &c : seg.at("configs")) {
                f.configs.push_back(NuclearConfig::parse(c.get<std::string>()));
            }
            f.duration = seg.value("duration", 0.0);
            f.error_probability = seg.value("error_probability", 0.0);
            s.segments.emplace_back(std::move(f));
        } else if (type == "reset") {
            s.segments.emplace_back(ElectronReset{seg.value("duration", 0.0)});
        } else if (type == "readout") {
            s.segments.emplace_back(NuclearReadout{seg.at("order").get<std::vector<int>>()});
        } else {
            throw std::invalid_argument("unknown schedule segment type: " + type);
        }
    }
    s.validate();
    return s;
}

}  // namespace spinreg
