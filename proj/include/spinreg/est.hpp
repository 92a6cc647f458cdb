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

#ifndef SPINREG_EST_HPP
#define SPINREG_EST_HPP

#include "spinreg/pulses.hpp"

namespace spinreg {

/// Electron state transfer: for each nucleus, reset the electron, flip it
/// adiabatically on the four configurations where that nucleus is wrong, then
/// rotate the nucleus by pi conditional on the electron being up. Each flip
/// misses with `flip_error`. With `verify`, a final electron reset and a
/// nuclear readout in order (1, 3, 2) are appended.
GateSchedule est_initialize(const Device &device, NuclearConfig target, double flip_error = 0.0,
                            bool verify = true);

}  // namespace spinreg

#endif
