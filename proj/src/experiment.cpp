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

#include "spinreg/experiment.hpp"

namespace spinreg {

nlohmann::json ExperimentRecord::to_json() const {
    nlohmann::json j = nlohmann::json::parse(deterministic_dump());
    j["timing"] = {{"wall_seconds", wall_seconds}};
    return j;
}

std::string ExperimentRecord::deterministic_dump() const {
    nlohmann::json j = {{"experiment", name}, {"seed", seed}, {"config", config}, {"results", payload}};
    return j.dump(2);
}

ExperimentRecord ExperimentRecord::from_json(const nlohmann::json &j) {
    ExperimentRecord r;
    r.name = j.at("experiment").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.config = j.value("config", nlohmann::json::object());
    r.payload = j.value("results", nlohmann::json::object());
    if (j.contains("timing")) {
        r.wall_seconds = j.at("timing").value("wall_seconds", 0.0);
    }
    return r;
}

}  // namespace spinreg
