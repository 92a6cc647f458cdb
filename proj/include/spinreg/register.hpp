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

#ifndef SPINREG_REGISTER_HPP
#define SPINREG_REGISTER_HPP

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>

namespace spinreg {

enum class Spin : int { Down = 0, Up = 1 };

inline Spin flip(Spin s) { return s == Spin::Down ? Spin::Up : Spin::Down; }

/// Computational configuration of the three nuclei, written n1 n2 n3 with
/// 0 = down. "001" means n1 down, n2 down, n3 up.
class NuclearConfig {
   public:
    constexpr NuclearConfig() = default;
    explicit constexpr NuclearConfig(int bits) : bits_(bits) {}

    static NuclearConfig parse(const std::string &text);
    static NuclearConfig from_spins(Spin n1, Spin n2, Spin n3);

    constexpr int bits() const { return bits_; }
    bool valid() const { return bits_ >= 0 && bits_ < 8; }
    /// Spin of nucleus 1..3.
    Spin spin(int nucleus) const;
    NuclearConfig with_spin(int nucleus, Spin s) const;
    std::string to_string() const;

    friend constexpr bool operator==(NuclearConfig a, NuclearConfig b) { return a.bits_ == b.bits_; }
    friend constexpr bool operator<(NuclearConfig a, NuclearConfig b) { return a.bits_ < b.bits_; }

   private:
    int bits_ = 0;
};

inline constexpr int kNumNuclei = 3;
inline constexpr int kNumConfigs = 8;

struct RegisterParams {
    double b0_tesla = 1.45;
    double gamma_e_hz_per_t = 27.97e9;
    double gamma_n_hz_per_t = 17.23e6;
    std::array<double, kNumNuclei> hyperfine_hz{6.0e6, 68.0e6, 103.0e6};

    /// Throws std::invalid_argument on non-positive field or couplings, or
    /// when gamma_e * b0 is not at least 10x the largest coupling.
    void validate() const;
};

struct QubitTiming {
    double f_rabi_hz = 0.0;
    double t2_star_s = 0.0;
    std::optional<double> t2_rabi_s;
};

struct QubitCalibration {
    /// Electron entries indexed by nuclear configuration bits.
    std::array<QubitTiming, kNumConfigs> electron{};
    std::array<QubitTiming, kNumNuclei> nuclei{};
    /// Used when a configuration has no measured electron Rabi frequency.
    double electron_f_rabi_fallback_hz = 171.0e3;

    const QubitTiming &electron_for(NuclearConfig c) const { return electron.at(c.bits()); }
    const QubitTiming &nucleus(int n) const { return nuclei.at(n - 1); }
    double electron_f_rabi(NuclearConfig c) const;
    double mean_electron_f_rabi() const;
    double mean_electron_t2_star() const;

    /// Duration of a pi/2 rotation on nucleus n.
    double nuclear_pi_half_s(int n) const { return 1.0 / (4.0 * nucleus(n).f_rabi_hz); }

    void validate() const;

    /// Rabi and Ramsey data of the measured device.
    static QubitCalibration table_s3();
};

/// Static device description plus its calibration data.
struct Device {
    RegisterParams params;
    QubitCalibration calibration = QubitCalibration::table_s3();

    void validate() const {
        params.validate();
        calibration.validate();
    }
};

struct TransitionTable {
    /// ESR offsets from gamma_e * b0, indexed by configuration bits.
    std::array<double, kNumConfigs> esr{};
    /// NMR frequency keyed by (nucleus 1..3, electron spin).
    std::map<std::pair<int, Spin>, double> nmr;
};

/// Sum over nuclei of m_i * A_i with m = -1/2 (down) or +1/2 (up).
double esr_offset(const RegisterParams &params, NuclearConfig config);

/// |gamma_n b0 + m_e A_i| with m_e = -1/2 for a down electron.
double nmr_frequency(const RegisterParams &params, int nucleus, Spin electron);

TransitionTable transition_table(const RegisterParams &params);

struct QualityFactors {
    double qubit = 0.0;
    std::optional<double> gate;
};

/// Index 0 is the electron (all-down configuration entry), 1..3 the nuclei.
std::array<QualityFactors, 4> quality_factors(const QubitCalibration &cal);

}  // namespace spinreg

#endif
