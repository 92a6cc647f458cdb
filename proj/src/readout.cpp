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

#include "spinreg/readout.hpp"

#include <cmath>
#include <stdexcept>

#include "spinreg/parallel.hpp"

namespace spinreg {

namespace {

constexpr double kThresholdSlack = 1e-12;

int idx(Spin s) { return static_cast<int>(s); }

void check_probability(double p, const char *name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string("readout: ") + name + " outside [0, 1]");
    }
}

}  // namespace

void NucleusReadoutParams::validate() const {
    check_probability(p_corr, "p_corr");
    check_probability(p_err, "p_err");
    check_probability(p_flip, "p_flip");
    if (p_corr < p_err) {
        throw std::invalid_argument("readout: p_corr below p_err inverts the classification");
    }
}

void MarkovReadoutModel::validate() const {
    for (const auto &n : nuclei) {
        n.validate();
    }
}

MarkovReadoutModel MarkovReadoutModel::perfect() {
    MarkovReadoutModel m;
    m.nuclei.fill({1.0, 0.0, 0.0});
    return m;
}

MarkovReadoutModel MarkovReadoutModel::calibrated() {
    MarkovReadoutModel m;
    m.nuclei[0] = {0.320, 0.011, 9.3e-5};
    m.nuclei[1] = {0.308, 0.014, 1.07e-4};
    m.nuclei[2] = {0.261, 0.0, 8.1e-5};
    return m;
}

void ReadoutPolicy::validate() const {
    for (int s : shots) {
        if (s < 1) {
            throw std::invalid_argument("readout policy: shots must be at least 1");
        }
    }
    for (int n = 1; n <= kNumNuclei; ++n) {
        double th = threshold(n);
        if (!(th >= 0.0 && th < 1.0)) {
            throw std::invalid_argument("readout policy: thresholds must lie in [0, 1)");
        }
    }
    for (const auto *order : {&end_order, &start_order}) {
        int seen = 0;
        for (int n : *order) {
            if (n < 1 || n > kNumNuclei || (seen & (1 << n))) {
                throw std::invalid_argument("readout policy: order must be a permutation of 1, 2, 3");
            }
            seen |= 1 << n;
        }
    }
}

ReadoutPolicy ReadoutPolicy::unthresholded(std::array<int, kNumNuclei> shots) {
    ReadoutPolicy p;
    p.shots = shots;
    p.f_th = 0.0;
    return p;
}

Spin classify(double delta_f) { return delta_f > 0.0 ? Spin::Up : Spin::Down; }

bool passes_threshold(double delta_f, double f_th) { return std::abs(delta_f) >= f_th - kThresholdSlack; }

SingleReadout simulate_readout(const NucleusReadoutParams &params, Spin true_state, int shots, Rng &rng) {
    if (shots < 1) {
        throw std::invalid_argument("simulate_readout: shots must be at least 1");
    }
    SingleReadout r;
    Spin s = true_state;
    const double half_flip = 0.5 * params.p_flip;
    for (int k = 0; k < shots; ++k) {
        if (bernoulli(rng, half_flip)) {
            s = flip(s);
        }
        if (bernoulli(rng, s == Spin::Down ? params.p_corr : params.p_err)) {
            ++r.n_down;
        }
        if (bernoulli(rng, half_flip)) {
            s = flip(s);
        }
        if (bernoulli(rng, s == Spin::Up ? params.p_corr : params.p_err)) {
            ++r.n_up;
        }
    }
    r.delta_f = static_cast<double>(r.n_up - r.n_down) / shots;
    r.classified = classify(r.delta_f);
    r.post_state = s;
    return r;
}

double flip_parity_probability(double p_flip, int shots) {
    if (shots <= 0 || p_flip <= 0.0) {
        return 0.0;
    }
    return 0.5 * (1.0 - std::pow(1.0 - 2.0 * p_flip, shots));
}

ReadoutOutcome read_register(const MarkovReadoutModel &model, const ReadoutPolicy &policy, NuclearConfig state,
                             std::span<const int> order, Rng &rng) {
    ReadoutOutcome out;
    out.accepted.fill(true);
    std::array<Spin, kNumNuclei> spins{state.spin(1), state.spin(2), state.spin(3)};
    std::array<Spin, kNumNuclei> reported = spins;
    for (int m : order) {
        const int shots = policy.shots_for(m);
        if (policy.cross_flips) {
            for (int k = 1; k <= kNumNuclei; ++k) {
                if (k != m && bernoulli(rng, flip_parity_probability(model.nucleus(k).p_flip, shots))) {
                    spins[k - 1] = flip(spins[k - 1]);
                }
            }
        }
        SingleReadout r = simulate_readout(model.nucleus(m), spins[m - 1], shots, rng);
        spins[m - 1] = r.post_state;
        reported[m - 1] = r.classified;
        out.delta_f[m - 1] = r.delta_f;
        out.accepted[m - 1] = passes_threshold(r.delta_f, policy.threshold(m));
    }
    out.classified = NuclearConfig::from_spins(reported[0], reported[1], reported[2]);
    out.post_state = NuclearConfig::from_spins(spins[0], spins[1], spins[2]);
    return out;
}

ReadoutResponse readout_response(const NucleusReadoutParams &params, Spin initial, int shots, double f_th,
                                 int pre_shots) {
    if (shots < 1) {
        throw std::invalid_argument("readout_response: shots must be at least 1");
    }
    const int width = 2 * shots + 1;
    // dp[s][diff + shots] with diff = n_up - n_down.
    std::array<std::vector<double>, 2> dp{std::vector<double>(width, 0.0), std::vector<double>(width, 0.0)};
    const double q = flip_parity_probability(params.p_flip, pre_shots);
    dp[idx(initial)][shots] = 1.0 - q;
    dp[idx(flip(initial))][shots] = q;
    const double h = 0.5 * params.p_flip;

    auto mix_flip = [&] {
        for (int d = 0; d < width; ++d) {
            double a = dp[0][d];
            double b = dp[1][d];
            dp[0][d] = (1.0 - h) * a + h * b;
            dp[1][d] = (1.0 - h) * b + h * a;
        }
    };
    auto drive = [&](Spin peak, int step) {
        for (int s = 0; s < 2; ++s) {
            double blip = (s == idx(peak)) ? params.p_corr : params.p_err;
            std::vector<double> next(width, 0.0);
            for (int d = 0; d < width; ++d) {
                double w = dp[s][d];
                if (w == 0.0) {
                    continue;
                }
                next[d] += (1.0 - blip) * w;
                next[d + step] += blip * w;
            }
            dp[s] = std::move(next);
        }
    };
    for (int k = 0; k < shots; ++k) {
        mix_flip();
        drive(Spin::Down, -1);
        mix_flip();
        drive(Spin::Up, +1);
    }
    ReadoutResponse r{};
    for (int s = 0; s < 2; ++s) {
        for (int d = 0; d < width; ++d) {
            double delta_f = static_cast<double>(d - shots) / shots;
            int c = idx(classify(delta_f));
            int a = passes_threshold(delta_f, f_th) ? 1 : 0;
            r[c][a][s] += dp[s][d];
        }
    }
    return r;
}

ReadoutFidelity exact_readout_fidelity(const NucleusReadoutParams &params, int shots, double f_th) {
    double correct = 0.0;
    double accepted = 0.0;
    for (Spin s0 : {Spin::Down, Spin::Up}) {
        ReadoutResponse r = readout_response(params, s0, shots, f_th);
        for (int c = 0; c < 2; ++c) {
            for (int s = 0; s < 2; ++s) {
                accepted += 0.5 * r[c][1][s];
                if (c == idx(s0)) {
                    correct += 0.5 * r[c][1][s];
                }
            }
        }
    }
    ReadoutFidelity f;
    f.retention = accepted;
    f.fidelity = accepted > 0.0 ? correct / accepted : 0.5;
    return f;
}

ShotOptimum optimize_shot_counts(const MarkovReadoutModel &model, int max_shots) {
    if (max_shots < 1) {
        throw std::invalid_argument("optimize_shot_counts: max_shots must be at least 1");
    }
    ShotOptimum best;
    best.combined = 1.0;
    for (int n = 1; n <= kNumNuclei; ++n) {
        double top = -1.0;
        for (int shots = 1; shots <= max_shots; ++shots) {
            double f = exact_readout_fidelity(model.nucleus(n), shots, 0.0).fidelity;
            if (f > top + 1e-15) {
                top = f;
                best.shots[n - 1] = shots;
            }
        }
        best.fidelities[n - 1] = top;
        best.combined *= top;
    }
    return best;
}

int saturation_shots(const NucleusReadoutParams &params, int max_shots, double tolerance) {
    std::vector<double> f(max_shots + 1, 0.0);
    double top = 0.0;
    for (int shots = 1; shots <= max_shots; ++shots) {
        f[shots] = exact_readout_fidelity(params, shots, 0.0).fidelity;
        top = std::max(top, f[shots]);
    }
    for (int shots = 1; shots <= max_shots; ++shots) {
        if (f[shots] >= top - tolerance) {
            return shots;
        }
    }
    return max_shots;
}

double uncertainty_sigma_f(double f, double n) {
    if (n < 0.0 || f < 0.0 || f > 1.0) {
        throw std::invalid_argument("uncertainty_sigma_f: need n >= 0 and f in [0, 1]");
    }
    return std::sqrt(1.0 + 4.0 * f * (1.0 - f) * n) / (2.0 * (n + 1.0));
}

namespace {

struct ExperimentLayout {
    std::array<int, kNumNuclei> pre{};
    int total = 0;
};

ExperimentLayout layout(const ReadoutPolicy &policy) {
    ExperimentLayout l;
    int elapsed = 0;
    for (int m : policy.end_order) {
        l.pre[m - 1] = elapsed;
        elapsed += policy.shots_for(m);
    }
    l.total = elapsed;
    return l;
}

}  // namespace

ReadoutExperimentResult exact_readout_experiment(const MarkovReadoutModel &model, const ReadoutPolicy &policy) {
    model.validate();
    policy.validate();
    ExperimentLayout l = layout(policy);
    ReadoutExperimentResult res;
    res.combined_fidelity = 1.0;
    res.combined_retention = 1.0;
    for (int n = 1; n <= kNumNuclei; ++n) {
        const auto &p = model.nucleus(n);
        const int shots = policy.shots_for(n);
        const double th = policy.threshold(n);
        const int pre1 = policy.cross_flips ? l.pre[n - 1] : 0;
        const int between = policy.cross_flips ? l.total - shots : 0;
        double both = 0.0;
        double agree = 0.0;
        for (Spin s0 : {Spin::Down, Spin::Up}) {
            ReadoutResponse r1 = readout_response(p, s0, shots, th, pre1);
            for (int s1 = 0; s1 < 2; ++s1) {
                ReadoutResponse r2 = readout_response(p, static_cast<Spin>(s1), shots, th, between);
                for (int c1 = 0; c1 < 2; ++c1) {
                    double w1 = 0.5 * r1[c1][1][s1];
                    for (int c2 = 0; c2 < 2; ++c2) {
                        double w = w1 * (r2[c2][1][0] + r2[c2][1][1]);
                        both += w;
                        if (c1 == c2) {
                            agree += w;
                        }
                    }
                }
            }
        }
        res.retention[n - 1] = both;
        res.fidelity[n - 1] = both > 0.0 ? agree / both : 0.0;
        res.combined_fidelity *= res.fidelity[n - 1];
        res.combined_retention *= both;
    }
    return res;
}

ReadoutExperimentResult readout_fidelity_experiment(const MarkovReadoutModel &model, const ReadoutPolicy &policy,
                                                    std::uint64_t repetitions, std::uint64_t seed, int threads) {
    model.validate();
    policy.validate();
    if (repetitions < 1) {
        throw std::invalid_argument("readout_fidelity_experiment: repetitions must be at least 1");
    }
    // Bit layout per repetition: bit k = nucleus k+1 accepted twice, bit 3+k =
    // its two classifications agree.
    std::vector<std::uint8_t> flags(repetitions, 0);
    parallel_for(repetitions, threads, [&](std::uint64_t i) {
        Rng rng = make_stream(seed, i);
        NuclearConfig start(static_cast<int>(rng() & 7));
        ReadoutOutcome first = read_register(model, policy, start, policy.end_order, rng);
        ReadoutOutcome second = read_register(model, policy, first.post_state, policy.end_order, rng);
        std::uint8_t f = 0;
        for (int n = 1; n <= kNumNuclei; ++n) {
            if (first.accepted[n - 1] && second.accepted[n - 1]) {
                f |= 1 << (n - 1);
            }
            if (first.classified.spin(n) == second.classified.spin(n)) {
                f |= 1 << (n + 2);
            }
        }
        flags[i] = f;
    });
    ReadoutExperimentResult res;
    res.repetitions = repetitions;
    std::array<std::uint64_t, kNumNuclei> kept{};
    std::array<std::uint64_t, kNumNuclei> agreed{};
    std::uint64_t all_agree = 0;
    for (std::uint8_t f : flags) {
        bool all = true;
        bool all_same = true;
        for (int k = 0; k < kNumNuclei; ++k) {
            bool acc = f & (1 << k);
            bool same = f & (1 << (k + 3));
            kept[k] += acc;
            agreed[k] += acc && same;
            all = all && acc;
            all_same = all_same && same;
        }
        res.retained += all;
        all_agree += all && all_same;
    }
    for (int k = 0; k < kNumNuclei; ++k) {
        res.retention[k] = static_cast<double>(kept[k]) / repetitions;
        res.fidelity[k] = kept[k] ? static_cast<double>(agreed[k]) / kept[k] : 0.0;
        res.sigma[k] = uncertainty_sigma_f(res.fidelity[k], static_cast<double>(kept[k]));
    }
    res.combined_retention = static_cast<double>(res.retained) / repetitions;
    res.combined_fidelity = res.retained ? static_cast<double>(all_agree) / res.retained : 0.0;
    res.combined_sigma = uncertainty_sigma_f(res.combined_fidelity, static_cast<double>(res.retained));
    return res;
}

std::vector<HistogramBin> delta_f_histogram(const NucleusReadoutParams &params, int shots, std::uint64_t repetitions,
                                            std::uint64_t seed) {
    std::vector<HistogramBin> bins(2 * shots + 1);
    for (int d = 0; d <= 2 * shots; ++d) {
        bins[d].center = static_cast<double>(d - shots) / shots;
    }
    for (std::uint64_t i = 0; i < repetitions; ++i) {
        Rng rng = make_stream(seed, i);
        SingleReadout r = simulate_readout(params, (i & 1) ? Spin::Up : Spin::Down, shots, rng);
        ++bins[r.n_up - r.n_down + shots].count;
    }
    return bins;
}

void write_histogram_csv(std::ostream &out, const std::vector<HistogramBin> &bins) {
    out << "delta_f,count\n";
    for (const auto &b : bins) {
        out << b.center << "," << b.count << "\n";
    }
}

}  // namespace spinreg
