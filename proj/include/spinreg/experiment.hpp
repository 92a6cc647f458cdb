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

#ifndef SPINREG_EXPERIMENT_HPP
#define SPINREG_EXPERIMENT_HPP

#include <chrono>
#include <cstdint>
#include <string>

#include "json.hpp"

namespace spinreg {

struct ExperimentRecord {
    std::string name;
    nlohmann::json config = nlohmann::json::object();
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
    nlohmann::json payload = nlohmann::json::object();

    /// Full record; timing lives under "timing" so it can be stripped.
    nlohmann::json to_json() const;
    /// Record without timing. Two runs with the same config and seed give
    /// identical strings.
    std::string deterministic_dump() const;
    static ExperimentRecord from_json(const nlohmann::json &j);
};

class Stopwatch {
   public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

   private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace spinreg

#endif
