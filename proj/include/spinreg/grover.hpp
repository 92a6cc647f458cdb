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

#ifndef SPINREG_GROVER_HPP
#define SPINREG_GROVER_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "spinreg/noise.hpp"
#include "spinreg/pulses.hpp"
#include "spinreg/readout.hpp"

namespace spinreg {

/// Earliest local maximum of sin^2((2r + 1) theta) with
/// sin(theta) = sqrt(marked / 2^n). Ties go to the smaller r.
int optimal_iterations(int n, int marked);

/// sin^2((2r + 1) asin(sqrt(marked / 2^n))).
double ideal_success(int n, int marked, int r);

struct GroverSpec {
    std::vector<NuclearConfig> marked{NuclearConfig(0)};
    /// Negative selects optimal_iterations.
    int iterations = -1;

    int resolved_iterations() const;
    void validate() const;
};

/// Preparation R_y(pi/2) on every nucleus, then per iteration: one 2pi ESR
/// pulse per marked configuration, R_{-y}(pi/2) on every nucleus, a 2pi ESR
/// pulse on 000 and R_y(pi/2) on every nucleus. Nuclear rotations run in the
/// order (n3, n2, n1). The iteration equals the textbook Grover step up to a
/// global sign.
GateSchedule build_grover_schedule(const GroverSpec &spec, const Device &device);

/// Noiseless outcome distribution over the 8 nuclear configurations.
std::array<double, kNumConfigs> grover_distribution(const GroverSpec &spec, const Device &device);

struct GroverRunOptions {
    std::uint64_t trajectories = 10000;
    std::uint64_t seed = 1;
    bool noise = true;
    /// Pass the final state through the Markov readout chain and postselect.
    bool markov_readout = true;
    /// Verify the initialized 000 with a readout in the policy's start order
    /// and keep only trajectories that report it; flips during that readout
    /// carry into the circuit. Needs markov_readout.
    bool verify_init = true;
    int threads = 1;
};

struct GroverResult {
    int iterations = 0;
    std::array<std::uint64_t, kNumConfigs> histogram{};
    std::uint64_t trajectories = 0;
    std::uint64_t retained = 0;
    double success = 0.0;
    double sigma = 0.0;
    double ideal = 0.0;
    double ratio = 0.0;
    double ratio_sigma = 0.0;
};

/// Monte-Carlo Grover run. Every trajectory draws one quasistatic noise
/// sample, optionally verifies initialization, simulates the schedule, samples a nuclear
/// configuration and reads it out through the Markov chain in the policy's
/// end order. Only fully accepted readouts are kept.
GroverResult run_grover(const GroverSpec &spec, const Device &device, const NoiseParams &noise,
                        const MarkovReadoutModel &model, const ReadoutPolicy &policy, const GroverRunOptions &options);

/// Benchmarked operation fidelities that feed the error budget.
struct BenchmarkFidelities {
    std::array<double, kNumNuclei> spam{0.9946, 0.9942, 0.9957};
    std::array<double, kNumNuclei> single_qubit{0.9998, 0.9995, 0.9995};
    double multi_qubit = 0.9949;
    double electron_single_qubit = 0.9994;
    std::array<double, kNumNuclei> table_idle{0.9998, 0.9962, 0.9970};
};

struct BudgetEntry {
    std::string label;
    int count = 1;
    double fidelity = 1.0;
    bool idle = false;
};

struct ErrorBudget {
    std::vector<BudgetEntry> entries;
    double total_without_idle = 1.0;
    double total_with_idle = 1.0;
};

/// Products of fidelity^count over the non-idle entries and over all entries.
/// Throws std::invalid_argument on an empty list or a fidelity outside [0, 1].
ErrorBudget error_budget(const std::vector<BudgetEntry> &entries);

/// Idle time of nucleus n while pi/2 rotations run on the other two nuclei.
double grover_idle_time(const QubitCalibration &cal, int nucleus);

/// Rows for the three-qubit Grover circuit with two iterations. With
/// `computed_idle` the idle rows come from idle_fidelity, otherwise from the
/// benchmark table.
std::vector<BudgetEntry> grover_budget_entries(const Device &device, const BenchmarkFidelities &bench,
                                               bool computed_idle = true);

}  // namespace spinreg

#endif
