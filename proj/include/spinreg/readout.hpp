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

#ifndef SPINREG_READOUT_HPP
#define SPINREG_READOUT_HPP

#include <array>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "spinreg/random.hpp"
#include "spinreg/register.hpp"

namespace spinreg {

/// Shot-level chain for one nucleus. Each shot drives the down peak, then the
/// up peak; the nucleus gets a flip opportunity with probability p_flip / 2
/// before each drive.
struct NucleusReadoutParams {
    double p_corr = 1.0;
    double p_err = 0.0;
    double p_flip = 0.0;

    void validate() const;
};

struct MarkovReadoutModel {
    std::array<NucleusReadoutParams, kNumNuclei> nuclei{};

    const NucleusReadoutParams &nucleus(int n) const { return nuclei.at(n - 1); }
    void validate() const;

    static MarkovReadoutModel perfect();
    /// Double-readout fidelities 99.46 / 99.42 / 99.57% under the default
    /// policy at about one third retention.
    static MarkovReadoutModel calibrated();
};

struct ReadoutPolicy {
    std::array<int, kNumNuclei> shots{24, 18, 24};
    double f_th = 0.24;
    std::array<double, kNumNuclei> threshold_scale{0.5, 1.0, 2.0 / 3.0};
    std::array<int, kNumNuclei> end_order{2, 3, 1};
    std::array<int, kNumNuclei> start_order{1, 3, 2};
    /// Nuclei not being read still see every shot of the others.
    bool cross_flips = true;

    int shots_for(int n) const { return shots.at(n - 1); }
    double threshold(int n) const { return f_th * threshold_scale.at(n - 1); }
    void validate() const;

    static ReadoutPolicy paper() { return {}; }
    static ReadoutPolicy unthresholded(std::array<int, kNumNuclei> shots);
};

/// Positive delta_f reads up, delta_f <= 0 reads down.
Spin classify(double delta_f);
bool passes_threshold(double delta_f, double f_th);

struct SingleReadout {
    double delta_f = 0.0;
    int n_down = 0;
    int n_up = 0;
    Spin classified = Spin::Down;
    Spin post_state = Spin::Down;
};

SingleReadout simulate_readout(const NucleusReadoutParams &params, Spin true_state, int shots, Rng &rng);

struct ReadoutOutcome {
    std::array<double, kNumNuclei> delta_f{};
    std::array<bool, kNumNuclei> accepted{};
    NuclearConfig classified;
    NuclearConfig post_state;

    bool all_accepted() const { return accepted[0] && accepted[1] && accepted[2]; }
};

/// Reads the nuclei in `order` and applies the policy thresholds. Nuclei not
/// in `order` report their true spin and count as accepted.
ReadoutOutcome read_register(const MarkovReadoutModel &model, const ReadoutPolicy &policy, NuclearConfig state,
                             std::span<const int> order, Rng &rng);

/// Probability that an odd number of flips happens over `shots` shots.
double flip_parity_probability(double p_flip, int shots);

/// Exact single-readout response: probabilities indexed [classified][accepted][post_state]
/// for a nucleus that starts in `initial` and sees `pre_shots` foreign shots first.
using ReadoutResponse = std::array<std::array<std::array<double, 2>, 2>, 2>;
ReadoutResponse readout_response(const NucleusReadoutParams &params, Spin initial, int shots, double f_th,
                                 int pre_shots = 0);

struct ReadoutFidelity {
    double fidelity = 1.0;
    double retention = 1.0;
};

/// Probability that the classification equals the initial state among
/// accepted readouts, averaged over both initial states, by exact dynamic
/// programming over the chain.
ReadoutFidelity exact_readout_fidelity(const NucleusReadoutParams &params, int shots, double f_th);

struct ShotOptimum {
    std::array<int, kNumNuclei> shots{};
    std::array<double, kNumNuclei> fidelities{};
    double combined = 0.0;
};

/// Maximizes F1 F2 F3 of unthresholded readouts over 1..max_shots per nucleus.
/// Ties go to fewer shots.
ShotOptimum optimize_shot_counts(const MarkovReadoutModel &model, int max_shots = 50);

/// Shots after which the unthresholded fidelity of `params` stays within
/// `tolerance` of its value at max_shots.
int saturation_shots(const NucleusReadoutParams &params, int max_shots = 50, double tolerance = 5e-4);

/// sqrt(1 + 4 f (1 - f) n) / (2 (n + 1)).
double uncertainty_sigma_f(double f, double n);

struct ReadoutExperimentResult {
    std::array<double, kNumNuclei> fidelity{};
    std::array<double, kNumNuclei> sigma{};
    std::array<double, kNumNuclei> retention{};
    double combined_fidelity = 0.0;
    double combined_sigma = 0.0;
    double combined_retention = 0.0;
    std::uint64_t repetitions = 0;
    std::uint64_t retained = 0;
};

/// Reads all nuclei, waits, reads them again. Fidelity is the agreement rate
/// of the two readouts among repetitions where both pass the thresholds.
/// Nuclei start in uniformly random configurations.
ReadoutExperimentResult readout_fidelity_experiment(const MarkovReadoutModel &model, const ReadoutPolicy &policy,
                                                    std::uint64_t repetitions, std::uint64_t seed, int threads = 1);

/// The same experiment evaluated exactly; repetitions/retained are unset and
/// sigma is zero.
ReadoutExperimentResult exact_readout_experiment(const MarkovReadoutModel &model, const ReadoutPolicy &policy);

struct HistogramBin {
    double center = 0.0;
    std::uint64_t count = 0;
};

/// Histogram of delta_f for a nucleus prepared in each state with equal weight.
std::vector<HistogramBin> delta_f_histogram(const NucleusReadoutParams &params, int shots, std::uint64_t repetitions,
                                            std::uint64_t seed);

void write_histogram_csv(std::ostream &out, const std::vector<HistogramBin> &bins);

}  // namespace spinreg

#endif
