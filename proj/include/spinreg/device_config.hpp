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

#ifndef SPINREG_DEVICE_CONFIG_HPP
#define SPINREG_DEVICE_CONFIG_HPP

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "spinreg/grover.hpp"
#include "spinreg/noise.hpp"
#include "spinreg/readout.hpp"
#include "spinreg/register.hpp"

namespace spinreg {

class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Everything an experiment needs besides its own options. Only the register
/// fields are mandatory in a config file; the other sections fall back to the
/// built-in defaults.
struct DeviceConfig {
    Device device;
    MarkovReadoutModel readout = MarkovReadoutModel::calibrated();
    ReadoutPolicy policy = ReadoutPolicy::paper();
    BenchmarkFidelities benchmarks;

    NoiseParams noise() const { return NoiseParams::from_calibration(device.calibration); }
    void validate() const;
};

nlohmann::json to_json(const DeviceConfig &config);
/// Throws ConfigError on missing fields, wrong types or invalid values.
DeviceConfig device_config_from_json(const nlohmann::json &j);

DeviceConfig load_device_config(const std::string &path);
void save_device_config(const DeviceConfig &config, const std::string &path);

}  // namespace spinreg

#endif
