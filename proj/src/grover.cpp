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

#include "spinreg/grover.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spinreg/parallel.hpp"

namespace spinreg {

namespace {

constexpr double kPi = std::numbers::pi;

double grover_angle(int n, int marked) {
    if (n < 1 || n > 30 || marked < 1 || marked >= (1 << n)) {
        throw std::invalid_argument("grover: need 1 <= marked < 2^n");
    }
    return std::asin(std::sqrt(static_cast<double>(marked) / static_cast<double>(1 << n)));
}

void all_nuclei(GateSchedule &s, const Device &device, Axis axis) {
    for (int n = kNumNuclei; n >= 1; --n) {
        s.then(nmr_pulse(device, n, Spin::Down, axis, kPi / 2));
    }
}

}  // namespace

int optimal_iterations(int n, int marked) {
    double theta = grover_angle(n, marked);
    auto p = [&](int r) { return std::pow(std::sin((2 * r + 1) * theta), 2); };
    int r = 0;
    while (p(r + 1) > p(r) + 1e-12) {
        ++r;
    }
    return r;
}

double ideal_success(int n, int marked, int r) {
    if (r < 0) {
        throw std::invalid_argument("ideal_success: r must be non-negative");
    }
    return std::pow(std::sin((2 * r + 1) * grover_angle(n, marked)), 2);
}

int GroverSpec::resolved_iterations() const {
    return iterations >= 0 ? iterations : optimal_iterations(kNumNuclei, static_cast<int>(marked.size()));
}

void GroverSpec::validate() const {
    if (marked.empty()) {
        throw std::invalid_argument("grover: marked set is empty");
    }
    int seen = 0;
    for (NuclearConfig c : marked) {
        if (!c.valid()) {
            throw std::invalid_argument("grover: invalid marked configuration");
        }
        if (seen & (1 << c.bits())) {
            throw std::invalid_argument("grover: duplicate marked configuration");
        }
        seen |= 1 << c.bits();
    }
    if (marked.size() >= static_cast<std::size_t>(kNumConfigs)) {
        throw std::invalid_argument("grover: at least one configuration must be unmarked");
    }
}

GateSchedule build_grover_schedule(const GroverSpec &spec, const Device &device) {
    spec.validate();
    const int r = spec.resolved_iterations();
    GateSchedule s;
    s.name = "grover";
    all_nuclei(s, device, Axis::Y);
    for (int it = 0; it < r; ++it) {
        for (NuclearConfig c : spec.marked) {
            PulseSpec oracle = esr_rotation(device, c, Axis::X, 2 * kPi);
            oracle.label = "oracle ESR[" + c.to_string() + "] 2pi";
            s.then(oracle);
        }
        all_nuclei(s, device, Axis::MinusY);
        PulseSpec phase = esr_rotation(device, NuclearConfig(0), Axis::X, 2 * kPi);
        phase.label = "diffusion ESR[000] 2pi";
        s.then(phase);
        all_nuclei(s, device, Axis::Y);
    }
    return s;
}

std::array<double, kNumConfigs> grover_distribution(const GroverSpec &spec, const Device &device) {
    PureState psi;
    run_schedule(device, psi, build_grover_schedule(spec, device), NoiseSample{});
    std::array<double, kNumConfigs> p{};
    for (int k = 0; k < kRegisterDim; ++k) {
        p[k & 7] += psi.probability(k);
    }
    return p;
}

GroverResult run_grover(const GroverSpec &spec, const Device &device, const NoiseParams &noise,
                        const MarkovReadoutModel &model, const ReadoutPolicy &policy, const GroverRunOptions &options) {
    spec.validate();
    model.validate();
    policy.validate();
    if (options.trajectories < 1) {
        throw std::invalid_argument("run_grover: need at least one trajectory");
    }
    const GateSchedule schedule = build_grover_schedule(spec, device);
    const NoiseParams active = options.noise ? noise : NoiseParams::off();
    // -1 marks a rejected trajectory.
    std::vector<int> reported(options.trajectories, -1);
    parallel_for(options.trajectories, options.threads, [&](std::uint64_t i) {
        Rng rng = make_stream(options.seed, i);
        NoiseSample sample = sample_noise(active, rng);
        PureState psi;
        if (options.markov_readout && options.verify_init) {
            ReadoutOutcome v = read_register(model, policy, NuclearConfig(0), policy.start_order, rng);
            if (!v.all_accepted() || v.classified.bits() != 0) {
                return;
            }
            psi = PureState::basis(v.post_state.bits());
        }
        run_schedule(device, psi, schedule, sample);
        double u = uniform01(rng);
        int config = kNumConfigs - 1;
        double acc = 0.0;
        for (int c = 0; c < kNumConfigs; ++c) {
            acc += psi.probability(c) + psi.probability(8 + c);
            if (u < acc) {
                config = c;
                break;
            }
        }
        if (!options.markov_readout) {
            reported[i] = config;
            return;
        }
        ReadoutOutcome out = read_register(model, policy, NuclearConfig(config), policy.end_order, rng);
        if (out.all_accepted()) {
            reported[i] = out.classified.bits();
        }
    });
    GroverResult res;
    res.iterations = spec.resolved_iterations();
    res.trajectories = options.trajectories;
    std::uint64_t hits = 0;
    for (int c : reported) {
        if (c < 0) {
            continue;
        }
        ++res.histogram[c];
        ++res.retained;
        if (std::any_of(spec.marked.begin(), spec.marked.end(), [&](NuclearConfig m) { return m.bits() == c; })) {
            ++hits;
        }
    }
    res.ideal = ideal_success(kNumNuclei, static_cast<int>(spec.marked.size()), res.iterations);
    if (res.retained > 0) {
        double n = static_cast<double>(res.retained);
        res.success = hits / n;
        res.sigma = std::sqrt(std::max(res.success * (1.0 - res.success), 1.0 / n) / n);
    }
    res.ratio = res.ideal > 0.0 ? res.success / res.ideal : 0.0;
    res.ratio_sigma = res.ideal > 0.0 ? res.sigma / res.ideal : 0.0;
    return res;
}

ErrorBudget error_budget(const std::vector<BudgetEntry> &entries) {
    if (entries.empty()) {
        throw std::invalid_argument("error_budget: no entries");
    }
    ErrorBudget b;
    b.entries = entries;
    for (const auto &e : entries) {
        if (!(e.fidelity >= 0.0 && e.fidelity <= 1.0)) {
            throw std::invalid_argument("error_budget: fidelity outside [0, 1] for " + e.label);
        }
        if (e.count < 0) {
            throw std::invalid_argument("error_budget: negative count for " + e.label);
        }
        double f = std::pow(e.fidelity, e.count);
        if (!e.idle) {
            b.total_without_idle *= f;
        }
        b.total_with_idle *= f;
    }
    return b;
}

double grover_idle_time(const QubitCalibration &cal, int nucleus) {
    double tau = 0.0;
    for (int m = 1; m <= kNumNuclei; ++m) {
        if (m != nucleus) {
            tau += cal.nuclear_pi_half_s(m);
        }
    }
    return tau;
}

std::vector<BudgetEntry> grover_budget_entries(const Device &device, const BenchmarkFidelities &bench,
                                               bool computed_idle) {
    std::vector<BudgetEntry> rows;
    for (int n = 1; n <= kNumNuclei; ++n) {
        rows.push_back({"SPAM (n" + std::to_string(n) + ")", 1, bench.spam[n - 1], false});
    }
    for (int n = 1; n <= kNumNuclei; ++n) {
        rows.push_back({"Single-qubit gate (n" + std::to_string(n) + ")", 5, bench.single_qubit[n - 1], false});
    }
    rows.push_back({"Multi-qubit gate", 4, bench.multi_qubit, false});
    for (int n = 1; n <= kNumNuclei; ++n) {
        double f = bench.table_idle[n - 1];
        if (computed_idle) {
            f = idle_fidelity(grover_idle_time(device.calibration, n), device.calibration.nucleus(n).t2_star_s);
        }
        rows.push_back({"n" + std::to_string(n) + " idle during pi/2 rotations on the other nuclei", 4, f, true});
    }
    return rows;
}

}  // namespace spinreg
