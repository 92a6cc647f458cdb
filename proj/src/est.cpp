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

#include "spinreg/est.hpp"

#include <numbers>
#include <stdexcept>

namespace spinreg {

GateSchedule est_initialize(const Device &device, NuclearConfig target, double flip_error, bool verify) {
    if (!target.valid()) {
        throw std::invalid_argument("est_initialize: invalid target configuration");
    }
    if (flip_error < 0.0 || flip_error > 1.0) {
        throw std::invalid_argument("est_initialize: flip error must be a probability");
    }
    GateSchedule s;
    s.name = "est-" + target.to_string();
    for (int n = 1; n <= kNumNuclei; ++n) {
        s.then(ElectronReset{});
        ConditionalFlip flip;
        flip.error_probability = flip_error;
        for (int c = 0; c < kNumConfigs; ++c) {
            NuclearConfig cfg(c);
            if (cfg.spin(n) != target.spin(n)) {
                flip.configs.push_back(cfg);
            }
        }
        s.then(flip);
        s.then(nmr_pulse(device, n, Spin::Up, Axis::X, std::numbers::pi));
    }
    if (verify) {
        s.then(ElectronReset{});
        s.then(NuclearReadout{{1, 3, 2}});
    }
    return s;
}

}  // namespace spinreg
