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

#ifndef SPINREG_CLIFFORD_HPP
#define SPINREG_CLIFFORD_HPP

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "spinreg/pulses.hpp"

namespace spinreg {

/// Native single-qubit gates. I is an explicit idle lasting one pi/2 time.
enum class NativeGate { I, X90, MX90, Y90, MY90, X180, Y180 };

inline constexpr std::array<NativeGate, 6> kRotationGates{NativeGate::X90,  NativeGate::MX90, NativeGate::Y90,
                                                          NativeGate::MY90, NativeGate::X180, NativeGate::Y180};

const char *native_name(NativeGate g);
Axis native_axis(NativeGate g);
/// Rotation angle; zero for I.
double native_angle(NativeGate g);
/// cos(a/2) I - i sin(a/2) (cos(phi) sx + sin(phi) sy).
Eigen::Matrix2cd native_matrix(NativeGate g);

/// Phase-insensitive hash key of a unitary: the matrix divided by the phase
/// of its first significant entry, rounded on a fine grid.
std::string phase_key(const Matrix &m);

struct Clifford1Q {
    int index = 0;
    Eigen::Matrix2cd matrix;
    /// Applied left to right.
    std::vector<NativeGate> gates;
};

/// The 24-element single-qubit Clifford group. Every element carries a
/// shortest word over {+-X90, +-Y90, X180, Y180}; the identity is the single
/// gate I.
class CliffordGroup1Q {
   public:
    static const CliffordGroup1Q &instance();

    int size() const { return static_cast<int>(elements_.size()); }
    const Clifford1Q &element(int i) const { return elements_.at(i); }
    const std::vector<Clifford1Q> &elements() const { return elements_; }

    /// Index of `first` followed by `second`.
    int compose(int first, int second) const { return table_[first][second]; }
    int inverse(int i) const { return inverse_[i]; }
    /// Index of a unitary equal to a group element up to phase, or -1.
    int find(const Eigen::Matrix2cd &m) const;
    int identity_index() const { return 0; }
    double mean_physical_gates() const;

   private:
    CliffordGroup1Q();
    std::vector<Clifford1Q> elements_;
    std::unordered_map<std::string, int> lookup_;
    std::vector<std::vector<int>> table_;
    std::vector<int> inverse_;
};

/// Native entangler of the register: diag(-1, 1, 1, 1) on an ordered pair.
Eigen::Matrix4cd native_cz_matrix();

/// One layer of a two-qubit Clifford: local Cliffords on the first and second
/// qubit, optionally followed by the native CZ.
struct CliffordLayer2Q {
    int local_a = 0;
    int local_b = 0;
    bool cz_after = false;
};

struct Clifford2Q {
    int index = 0;
    Eigen::Matrix4cd matrix;
    int cz_count = 0;
    /// Layers in time order. Only the last layer has cz_after == false.
    std::vector<CliffordLayer2Q> layers;
};

/// The 11520-element two-qubit Clifford group, generated by local Cliffords
/// and the native CZ. Breadth-first search over CZ count gives every element
/// a decomposition with the minimum number of entangling gates.
class CliffordGroup2Q {
   public:
    static const CliffordGroup2Q &instance();

    int size() const { return static_cast<int>(elements_.size()); }
    const Clifford2Q &element(int i) const { return elements_.at(i); }
    int find(const Eigen::Matrix4cd &m) const;
    int identity_index() const { return 0; }
    /// Number of elements with 0, 1, 2 and 3 CZ gates.
    std::array<int, 4> class_sizes() const;
    double mean_cz() const;
    /// Mean number of non-identity single-qubit native gates per element.
    double mean_single_qubit_gates() const;

   private:
    CliffordGroup2Q();
    std::vector<Clifford2Q> elements_;
    std::unordered_map<std::string, int> lookup_;
};

/// Order of single-qubit gates inside one local layer.
enum class LayerSchedule {
    /// a1 b1 a2 b2 ...: neither qubit idles for a long stretch.
    Alternate,
    /// every gate on the first qubit, then every gate on the second.
    Serial,
};

LayerSchedule parse_layer_schedule(const std::string &name);

/// Physical gate on one qubit of the register. qubit 0 is the electron.
struct PhysicalGate {
    int qubit = 0;
    NativeGate gate = NativeGate::I;
    /// Native CZ on the benchmarked pair; qubit and gate are unused.
    bool cz = false;
};

/// Pulse segment for a native gate on `qubit`. Electron gates are conditional
/// on `electron_config`; nuclear gates are conditional on electron down.
Segment native_segment(const Device &device, int qubit, NativeGate gate, NuclearConfig electron_config = {});

/// Physical gate sequence of a two-qubit Clifford on nuclei (i, j). Identity
/// gates are dropped inside two-qubit decompositions.
std::vector<PhysicalGate> physical_gates(const Clifford2Q &c, int i, int j, LayerSchedule schedule);

}  // namespace spinreg

#endif
