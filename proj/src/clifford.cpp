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

#include "spinreg/clifford.hpp"

#include <cmath>
#include <cstring>
#include <deque>
#include <stdexcept>

namespace spinreg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kKeyScale = 1e6;

template <class M>
std::string key_of(const M &m) {
    const Eigen::Index n = m.size();
    Complex phase(1.0, 0.0);
    for (Eigen::Index k = 0; k < n; ++k) {
        Complex z = m(k / m.cols(), k % m.cols());
        if (std::abs(z) > 1e-6) {
            phase = std::conj(z) / std::abs(z);
            break;
        }
    }
    std::string key(static_cast<std::size_t>(n) * 2 * sizeof(std::int32_t), '\0');
    char *out = key.data();
    for (Eigen::Index k = 0; k < n; ++k) {
        Complex z = m(k / m.cols(), k % m.cols()) * phase;
        std::int32_t re = static_cast<std::int32_t>(std::llround(z.real() * kKeyScale));
        std::int32_t im = static_cast<std::int32_t>(std::llround(z.imag() * kKeyScale));
        std::memcpy(out, &re, sizeof re);
        std::memcpy(out + sizeof re, &im, sizeof im);
        out += 2 * sizeof re;
    }
    return key;
}

}  // namespace

const char *native_name(NativeGate g) {
    switch (g) {
        case NativeGate::I:
            return "I";
        case NativeGate::X90:
            return "X90";
        case NativeGate::MX90:
            return "-X90";
        case NativeGate::Y90:
            return "Y90";
        case NativeGate::MY90:
            return "-Y90";
        case NativeGate::X180:
            return "X180";
        case NativeGate::Y180:
            return "Y180";
    }
    return "?";
}

Axis native_axis(NativeGate g) {
    switch (g) {
        case NativeGate::MX90:
            return Axis::MinusX;
        case NativeGate::Y90:
        case NativeGate::Y180:
            return Axis::Y;
        case NativeGate::MY90:
            return Axis::MinusY;
        default:
            return Axis::X;
    }
}

double native_angle(NativeGate g) {
    switch (g) {
        case NativeGate::I:
            return 0.0;
        case NativeGate::X180:
        case NativeGate::Y180:
            return kPi;
        default:
            return kPi / 2;
    }
}

Eigen::Matrix2cd native_matrix(NativeGate g) {
    const double a = native_angle(g);
    const double phi = axis_phase(native_axis(g));
    const Complex i(0.0, 1.0);
    Eigen::Matrix2cd m;
    m(0, 0) = std::cos(a / 2);
    m(1, 1) = std::cos(a / 2);
    m(0, 1) = -i * std::sin(a / 2) * std::polar(1.0, -phi);
    m(1, 0) = -i * std::sin(a / 2) * std::polar(1.0, phi);
    return m;
}

std::string phase_key(const Matrix &m) { return key_of(m); }

CliffordGroup1Q::CliffordGroup1Q() {
    Clifford1Q id;
    id.index = 0;
    id.matrix = Eigen::Matrix2cd::Identity();
    id.gates = {NativeGate::I};
    lookup_[key_of(id.matrix)] = 0;
    elements_.push_back(id);
    std::deque<int> queue{0};
    while (!queue.empty()) {
        int cur = queue.front();
        queue.pop_front();
        for (NativeGate g : kRotationGates) {
            Eigen::Matrix2cd m = native_matrix(g) * elements_[cur].matrix;
            std::string k = key_of(m);
            if (lookup_.count(k)) {
                continue;
            }
            Clifford1Q c;
            c.index = static_cast<int>(elements_.size());
            c.matrix = m;
            if (cur != 0) {
                c.gates = elements_[cur].gates;
            }
            c.gates.push_back(g);
            lookup_[k] = c.index;
            elements_.push_back(c);
            queue.push_back(c.index);
        }
    }
    if (elements_.size() != 24) {
        throw std::logic_error("single-qubit Clifford enumeration did not close at 24 elements");
    }
    const int n = size();
    table_.assign(n, std::vector<int>(n, -1));
    inverse_.assign(n, -1);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            int c = find(elements_[b].matrix * elements_[a].matrix);
            if (c < 0) {
                throw std::logic_error("single-qubit Clifford group is not closed");
            }
            table_[a][b] = c;
            if (c == 0) {
                inverse_[a] = b;
            }
        }
    }
}

const CliffordGroup1Q &CliffordGroup1Q::instance() {
    static const CliffordGroup1Q group;
    return group;
}

int CliffordGroup1Q::find(const Eigen::Matrix2cd &m) const {
    auto it = lookup_.find(key_of(m));
    return it == lookup_.end() ? -1 : it->second;
}

double CliffordGroup1Q::mean_physical_gates() const {
    double total = 0.0;
    for (const auto &c : elements_) {
        total += static_cast<double>(c.gates.size());
    }
    return total / size();
}

Eigen::Matrix4cd native_cz_matrix() {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
    m(0, 0) = -1.0;
    return m;
}

namespace {

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd &a, const Eigen::Matrix2cd &b) {
    Eigen::Matrix4cd m;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            m.block<2, 2>(2 * r, 2 * c) = a(r, c) * b;
        }
    }
    return m;
}

}  // namespace

CliffordGroup2Q::CliffordGroup2Q() {
    const auto &c1 = CliffordGroup1Q::instance();
    const int n1 = c1.size();
    std::vector<Eigen::Matrix4cd> locals(n1 * n1);
    for (int a = 0; a < n1; ++a) {
        for (int b = 0; b < n1; ++b) {
            locals[a * n1 + b] = kron2(c1.element(a).matrix, c1.element(b).matrix);
        }
    }
    std::vector<int> layer;
    for (int a = 0; a < n1; ++a) {
        for (int b = 0; b < n1; ++b) {
            Clifford2Q c;
            c.index = static_cast<int>(elements_.size());
            c.matrix = locals[a * n1 + b];
            c.layers = {{a, b, false}};
            if (!lookup_.emplace(key_of(c.matrix), c.index).second) {
                throw std::logic_error("duplicate local two-qubit Clifford");
            }
            layer.push_back(c.index);
            elements_.push_back(std::move(c));
        }
    }
    const Eigen::Matrix4cd cz = native_cz_matrix();
    for (int count = 1; count <= 3 && !layer.empty(); ++count) {
        std::vector<int> next;
        for (int x : layer) {
            const Eigen::Matrix4cd base = cz * elements_[x].matrix;
            for (int a = 0; a < n1; ++a) {
                for (int b = 0; b < n1; ++b) {
                    Eigen::Matrix4cd m = locals[a * n1 + b] * base;
                    std::string k = key_of(m);
                    if (lookup_.count(k)) {
                        continue;
                    }
                    Clifford2Q c;
                    c.index = static_cast<int>(elements_.size());
                    c.matrix = m;
                    c.cz_count = count;
                    c.layers = elements_[x].layers;
                    c.layers.back().cz_after = true;
                    c.layers.push_back({a, b, false});
                    lookup_.emplace(std::move(k), c.index);
                    next.push_back(c.index);
                    elements_.push_back(std::move(c));
                }
            }
        }
        layer = std::move(next);
    }
    if (elements_.size() != 11520) {
        throw std::logic_error("two-qubit Clifford enumeration did not reach 11520 elements");
    }
}

const CliffordGroup2Q &CliffordGroup2Q::instance() {
    static const CliffordGroup2Q group;
    return group;
}

int CliffordGroup2Q::find(const Eigen::Matrix4cd &m) const {
    auto it = lookup_.find(key_of(m));
    return it == lookup_.end() ? -1 : it->second;
}

std::array<int, 4> CliffordGroup2Q::class_sizes() const {
    std::array<int, 4> sizes{};
    for (const auto &c : elements_) {
        ++sizes.at(c.cz_count);
    }
    return sizes;
}

double CliffordGroup2Q::mean_cz() const {
    double total = 0.0;
    for (const auto &c : elements_) {
        total += c.cz_count;
    }
    return total / size();
}

double CliffordGroup2Q::mean_single_qubit_gates() const {
    const auto &c1 = CliffordGroup1Q::instance();
    double total = 0.0;
    for (const auto &c : elements_) {
        for (const auto &l : c.layers) {
            for (int local : {l.local_a, l.local_b}) {
                if (local != c1.identity_index()) {
                    total += static_cast<double>(c1.element(local).gates.size());
                }
            }
        }
    }
    return total / size();
}

LayerSchedule parse_layer_schedule(const std::string &name) {
    if (name == "alternate") {
        return LayerSchedule::Alternate;
    }
    if (name == "serial") {
        return LayerSchedule::Serial;
    }
    throw std::invalid_argument("unknown layer schedule: " + name);
}

Segment native_segment(const Device &device, int qubit, NativeGate gate, NuclearConfig electron_config) {
    if (qubit == kElectron) {
        if (gate == NativeGate::I) {
            return IdleSegment{0.25 / device.calibration.electron_f_rabi(electron_config), {0, 1, 2, 3}};
        }
        return esr_rotation(device, electron_config, native_axis(gate), native_angle(gate));
    }
    if (gate == NativeGate::I) {
        return IdleSegment{device.calibration.nuclear_pi_half_s(qubit), {0, 1, 2, 3}};
    }
    return nmr_pulse(device, qubit, Spin::Down, native_axis(gate), native_angle(gate));
}

std::vector<PhysicalGate> physical_gates(const Clifford2Q &c, int i, int j, LayerSchedule schedule) {
    const auto &c1 = CliffordGroup1Q::instance();
    std::vector<PhysicalGate> out;
    for (const auto &l : c.layers) {
        std::vector<NativeGate> ga;
        std::vector<NativeGate> gb;
        if (l.local_a != c1.identity_index()) {
            ga = c1.element(l.local_a).gates;
        }
        if (l.local_b != c1.identity_index()) {
            gb = c1.element(l.local_b).gates;
        }
        if (schedule == LayerSchedule::Serial) {
            for (NativeGate g : ga) {
                out.push_back({i, g, false});
            }
            for (NativeGate g : gb) {
                out.push_back({j, g, false});
            }
        } else {
            for (std::size_t k = 0; k < std::max(ga.size(), gb.size()); ++k) {
                if (k < ga.size()) {
                    out.push_back({i, ga[k], false});
                }
                if (k < gb.size()) {
                    out.push_back({j, gb[k], false});
                }
            }
        }
        if (l.cz_after) {
            out.push_back({0, NativeGate::I, true});
        }
    }
    return out;
}

}  // namespace spinreg
