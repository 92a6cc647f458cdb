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

#include "spinreg/device_config.hpp"

#include <cmath>
#include <fstream>

namespace spinreg {

using nlohmann::json;

namespace {

json timing_json(const QubitTiming &t) {
    json j = {{"f_rabi_hz", t.f_rabi_hz}, {"t2_star_s", t.t2_star_s}};
    if (t.t2_rabi_s) {
        j["t2_rabi_s"] = *t.t2_rabi_s;
    }
    return j;
}

QubitTiming timing_from(const json &j) {
    QubitTiming t;
    t.f_rabi_hz = j.at("f_rabi_hz").get<double>();
    // JSON has no infinity; null means no dephasing.
    t.t2_star_s = j.at("t2_star_s").is_null() ? kInfiniteT2 : j.at("t2_star_s").get<double>();
    if (j.contains("t2_rabi_s") && !j.at("t2_rabi_s").is_null()) {
        t.t2_rabi_s = j.at("t2_rabi_s").get<double>();
    }
    return t;
}

json t2_value(double t2) { return std::isfinite(t2) ? json(t2) : json(nullptr); }

}  // namespace

void DeviceConfig::validate() const {
    device.validate();
    readout.validate();
    policy.validate();
}

json to_json(const DeviceConfig &c) {
    const auto &p = c.device.params;
    const auto &cal = c.device.calibration;
    json electron = json::array();
    for (int k = 0; k < kNumConfigs; ++k) {
        json e = timing_json(cal.electron[k]);
        e["config"] = NuclearConfig(k).to_string();
        e["t2_star_s"] = t2_value(cal.electron[k].t2_star_s);
        electron.push_back(e);
    }
    json nuclei = json::array();
    for (int n = 1; n <= kNumNuclei; ++n) {
        json e = timing_json(cal.nucleus(n));
        e["t2_star_s"] = t2_value(cal.nucleus(n).t2_star_s);
        nuclei.push_back(e);
    }
    json readout = json::array();
    for (const auto &r : c.readout.nuclei) {
        readout.push_back({{"p_corr", r.p_corr}, {"p_err", r.p_err}, {"p_flip", r.p_flip}});
    }
    const auto &b = c.benchmarks;
    return {
        {"b0_tesla", p.b0_tesla},
        {"gamma_e_hz_per_t", p.gamma_e_hz_per_t},
        {"gamma_n_hz_per_t", p.gamma_n_hz_per_t},
        {"hyperfine_hz", p.hyperfine_hz},
        {"calibration",
         {{"electron", electron},
          {"nuclei", nuclei},
          {"electron_f_rabi_fallback_hz", cal.electron_f_rabi_fallback_hz}}},
        {"readout", readout},
        {"policy",
         {{"shots", c.policy.shots},
          {"f_th", c.policy.f_th},
          {"threshold_scale", c.policy.threshold_scale},
          {"end_order", c.policy.end_order},
          {"start_order", c.policy.start_order},
          {"cross_flips", c.policy.cross_flips}}},
        {"benchmarks",
         {{"spam", b.spam},
          {"single_qubit", b.single_qubit},
          {"multi_qubit", b.multi_qubit},
          {"electron_single_qubit", b.electron_single_qubit},
          {"table_idle", b.table_idle}}},
    };
}

DeviceConfig device_config_from_json(const json &j) {
    DeviceConfig c;
    try {
        auto &p = c.device.params;
        p.b0_tesla = j.at("b0_tesla").get<double>();
        p.gamma_e_hz_per_t = j.at("gamma_e_hz_per_t").get<double>();
        p.gamma_n_hz_per_t = j.at("gamma_n_hz_per_t").get<double>();
        p.hyperfine_hz = j.at("hyperfine_hz").get<std::array<double, kNumNuclei>>();

        const json &cal = j.at("calibration");
        const json &electron = cal.at("electron");
        if (!electron.is_array() || electron.size() != kNumConfigs) {
            throw ConfigError("calibration.electron needs one entry per nuclear configuration");
        }
        std::array<bool, kNumConfigs> seen{};
        for (const json &e : electron) {
            NuclearConfig cfg = NuclearConfig::parse(e.at("config").get<std::string>());
            if (seen[cfg.bits()]) {
                throw ConfigError("calibration.electron lists " + cfg.to_string() + " twice");
            }
            seen[cfg.bits()] = true;
            c.device.calibration.electron[cfg.bits()] = timing_from(e);
        }
        const json &nuclei = cal.at("nuclei");
        if (!nuclei.is_array() || nuclei.size() != kNumNuclei) {
            throw ConfigError("calibration.nuclei needs three entries");
        }
        for (int n = 0; n < kNumNuclei; ++n) {
            c.device.calibration.nuclei[n] = timing_from(nuclei[n]);
        }
        c.device.calibration.electron_f_rabi_fallback_hz =
            cal.value("electron_f_rabi_fallback_hz", c.device.calibration.electron_f_rabi_fallback_hz);

        if (j.contains("readout")) {
            const json &r = j.at("readout");
            if (!r.is_array() || r.size() != kNumNuclei) {
                throw ConfigError("readout needs three entries");
            }
            for (int n = 0; n < kNumNuclei; ++n) {
                c.readout.nuclei[n] = {r[n].at("p_corr").get<double>(), r[n].at("p_err").get<double>(),
                                       r[n].at("p_flip").get<double>()};
            }
        }
        if (j.contains("policy")) {
            const json &q = j.at("policy");
            auto &pol = c.policy;
            pol.shots = q.value("shots", pol.shots);
            pol.f_th = q.value("f_th", pol.f_th);
            pol.threshold_scale = q.value("threshold_scale", pol.threshold_scale);
            pol.end_order = q.value("end_order", pol.end_order);
            pol.start_order = q.value("start_order", pol.start_order);
            pol.cross_flips = q.value("cross_flips", pol.cross_flips);
        }
        if (j.contains("benchmarks")) {
            const json &q = j.at("benchmarks");
            auto &b = c.benchmarks;
            b.spam = q.value("spam", b.spam);
            b.single_qubit = q.value("single_qubit", b.single_qubit);
            b.multi_qubit = q.value("multi_qubit", b.multi_qubit);
            b.electron_single_qubit = q.value("electron_single_qubit", b.electron_single_qubit);
            b.table_idle = q.value("table_idle", b.table_idle);
        }
        c.validate();
    } catch (const json::exception &e) {
        throw ConfigError(std::string("device config: ") + e.what());
    } catch (const std::invalid_argument &e) {
        throw ConfigError(std::string("device config: ") + e.what());
    }
    return c;
}

DeviceConfig load_device_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open device config " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception &e) {
        throw ConfigError("device config " + path + ": " + e.what());
    }
    return device_config_from_json(j);
}

void save_device_config(const DeviceConfig &config, const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write " + path);
    }
    out << to_json(config).dump(2) << "\n";
}

}  // namespace spinreg
