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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "spinreg/readout.hpp"

namespace spinreg {
namespace {

struct McEstimate {
    double fidelity, sigma_fidelity, retention, sigma_retention;
};

McEstimate monte_carlo(const NucleusReadoutParams &p, int shots, double f_th, int runs, std::uint64_t seed) {
    Rng rng(seed);
    std::uint64_t accepted = 0, correct = 0;
    for (int k = 0; k < runs; ++k) {
        Spin s = (k & 1) ? Spin::Up : Spin::Down;
        SingleReadout r = simulate_readout(p, s, shots, rng);
        if (passes_threshold(r.delta_f, f_th)) {
            ++accepted;
            correct += r.classified == s ? 1 : 0;
        }
    }
    McEstimate e;
    e.retention = static_cast<double>(accepted) / runs;
    e.sigma_retention = std::sqrt(e.retention * (1 - e.retention) / runs);
    e.fidelity = accepted ? static_cast<double>(correct) / accepted : 0.5;
    e.sigma_fidelity = accepted ? std::sqrt(e.fidelity * (1 - e.fidelity) / accepted) : 0.0;
    return e;
}

TEST(SimulateReadout, NoiselessChainIsPerfect) {
    Rng rng(1);
    NucleusReadoutParams p;
    for (int n : {1, 7, 24}) {
        SingleReadout up = simulate_readout(p, Spin::Up, n, rng);
        EXPECT_DOUBLE_EQ(up.delta_f, 1.0);
        EXPECT_EQ(up.classified, Spin::Up);
        SingleReadout down = simulate_readout(p, Spin::Down, n, rng);
        EXPECT_DOUBLE_EQ(down.delta_f, -1.0);
        EXPECT_EQ(down.classified, Spin::Down);
    }
    EXPECT_THROW(simulate_readout(p, Spin::Up, 0, rng), std::invalid_argument);
}

TEST(SimulateReadout, UninformativeChainGuesses) {
    NucleusReadoutParams p{0.3, 0.3, 0.0};
    // Ties classify as down, so score both states with an odd shot count.
    McEstimate e = monte_carlo(p, 25, 0.0, 200000, 4);
    EXPECT_NEAR(e.fidelity, 0.5, 0.01);
}

TEST(SimulateReadout, QndWithoutFlips) {
    Rng rng(2);
    NucleusReadoutParams p{0.32, 0.011, 0.0};
    for (int k = 0; k < 2000; ++k) {
        Spin s = (k % 3) ? Spin::Up : Spin::Down;
        EXPECT_EQ(simulate_readout(p, s, 24, rng).post_state, s);
    }
}

TEST(SimulateReadout, HistogramShowsTwoPeaksAndFlipCounts) {
    NucleusReadoutParams p{0.32, 0.011, 0.01};
    auto bins = delta_f_histogram(p, 24, 10000, 3);
    std::uint64_t neg = 0, pos = 0, middle = 0, total = 0;
    for (const auto &b : bins) {
        total += b.count;
        if (b.center < -0.2) {
            neg = std::max(neg, b.count);
        } else if (b.center > 0.2) {
            pos = std::max(pos, b.count);
        }
        if (std::abs(b.center) < 0.15) {
            middle += b.count;
        }
    }
    EXPECT_EQ(total, 10000u);
    EXPECT_GT(neg, 300u);
    EXPECT_GT(pos, 300u);
    EXPECT_GT(middle, 0u);
    std::ostringstream csv;
    write_histogram_csv(csv, bins);
    EXPECT_NE(csv.str().find("delta_f,count"), std::string::npos);
}

TEST(FlipParity, MatchesBruteForceSum) {
    for (double p : {0.0, 1e-4, 0.01, 0.3}) {
        for (int n : {1, 2, 5, 24}) {
            double odd = 0.0;
            for (int k = 1; k <= n; k += 2) {
                odd += std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0)) * std::pow(p, k) *
                       std::pow(1 - p, n - k);
            }
            EXPECT_NEAR(flip_parity_probability(p, n), odd, 1e-12);
        }
    }
}

TEST(ExactReadout, ResponseIsAntisymmetricUnderThreshold) {
    // Exact without flips; the down-then-up probe order breaks it at O(p_flip).
    for (double pf : {0.0, 0.003}) {
        NucleusReadoutParams p{0.4, 0.05, pf};
        ReadoutResponse up = readout_response(p, Spin::Up, 17, 0.1);
        ReadoutResponse down = readout_response(p, Spin::Down, 17, 0.1);
        for (int c = 0; c < 2; ++c) {
            for (int s = 0; s < 2; ++s) {
                EXPECT_NEAR(up[c][1][s], down[1 - c][1][1 - s], pf == 0.0 ? 1e-14 : 0.01 * pf);
            }
        }
    }
    NucleusReadoutParams p{0.4, 0.05, 0.003};
    ReadoutResponse up = readout_response(p, Spin::Up, 17, 0.1);
    double total = 0.0;
    for (const auto &a : up) {
        for (const auto &b : a) {
            total += b[0] + b[1];
        }
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(ExactReadout, MonotoneAndConsistentWithoutFlips) {
    NucleusReadoutParams p{0.5, 0.05, 0.0};
    double prev = 0.0;
    for (int n = 1; n <= 50; n += 2) {
        double f = exact_readout_fidelity(p, n, 0.0).fidelity;
        EXPECT_GE(f, prev - 1e-12) << n;
        prev = f;
    }
    EXPECT_GT(prev, 0.999);
}

TEST(ExactReadout, AgreesWithMonteCarloOnRandomModels) {
    Rng rng(2026);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int m = 0; m < 20; ++m) {
        NucleusReadoutParams p;
        p.p_corr = 0.15 + 0.8 * u(rng);
        p.p_err = (p.p_corr - 0.05) * u(rng);
        p.p_flip = 0.01 * u(rng);
        int shots = 1 + static_cast<int>(rng() % 30);
        double f_th = 0.5 * u(rng);
        ReadoutFidelity exact = exact_readout_fidelity(p, shots, f_th);
        McEstimate mc = monte_carlo(p, shots, f_th, 100000, 100 + m);
        // Binomial errors under the exact values; a handful of accepted runs can all be correct.
        const double runs = 100000.0;
        double sr = std::sqrt(exact.retention * (1 - exact.retention) / runs);
        double sf = std::sqrt(exact.fidelity * (1 - exact.fidelity) / (mc.retention * runs));
        EXPECT_LE(std::abs(mc.retention - exact.retention), 3 * sr) << m;
        EXPECT_LE(std::abs(mc.fidelity - exact.fidelity), 3 * sf) << m;
    }
}

TEST(ExactReadout, ThresholdMonotonicityOnGrid) {
    for (double pc : {0.2, 0.32, 0.6}) {
        for (double pe : {0.0, 0.011, 0.08}) {
            for (double pf : {0.0, 1e-4, 3e-3}) {
                for (int n : {6, 13, 24}) {
                    NucleusReadoutParams p{pc, pe, pf};
                    ReadoutFidelity prev = exact_readout_fidelity(p, n, 0.0);
                    for (double th = 0.02; th <= 0.6; th += 0.02) {
                        ReadoutFidelity cur = exact_readout_fidelity(p, n, th);
                        if (cur.retention == 0.0) {
                            break;
                        }
                        EXPECT_GE(cur.fidelity, prev.fidelity - 1e-12) << pc << pe << pf << n << th;
                        EXPECT_LE(cur.retention, prev.retention + 1e-12);
                        prev = cur;
                    }
                }
            }
        }
    }
}

TEST(ExactReadout, SaturationNearNineteenShots) {
    // Third nucleus with p_flip of order 1e-4.
    NucleusReadoutParams p = MarkovReadoutModel::calibrated().nucleus(3);
    EXPECT_NEAR(p.p_flip, 1e-4, 0.3e-4);
    double f19 = exact_readout_fidelity(p, 19, 0.0).fidelity;
    double f50 = exact_readout_fidelity(p, 50, 0.0).fidelity;
    EXPECT_LT(f50 - f19, 5e-4);
    int sat = saturation_shots(p);
    EXPECT_GE(sat, 14);
    EXPECT_LE(sat, 24);
}

TEST(OptimizeShots, IdenticalNucleiShareOptimum) {
    MarkovReadoutModel m;
    m.nuclei.fill({0.3, 0.02, 2e-4});
    ShotOptimum o = optimize_shot_counts(m);
    EXPECT_EQ(o.shots[0], o.shots[1]);
    EXPECT_EQ(o.shots[1], o.shots[2]);
    EXPECT_NEAR(o.combined, o.fidelities[0] * o.fidelities[1] * o.fidelities[2], 1e-15);
}

TEST(OptimizeShots, NoFlipsPushesToMaximum) {
    MarkovReadoutModel m;
    m.nuclei.fill({0.3, 0.15, 0.0});
    ShotOptimum o = optimize_shot_counts(m, 15);
    for (int s : o.shots) {
        EXPECT_GE(s, 14);
    }
}

TEST(OptimizeShots, CalibratedModelOptimum) {
    ShotOptimum o = optimize_shot_counts(MarkovReadoutModel::calibrated());
    RecordProperty("optimum", std::to_string(o.shots[0]) + "," + std::to_string(o.shots[1]) + "," +
                                  std::to_string(o.shots[2]));
    RecordProperty("combined", std::to_string(o.combined));
    for (int s : o.shots) {
        EXPECT_GE(s, 1);
        EXPECT_LE(s, 50);
    }
    EXPECT_GT(o.combined, 0.98);
}

TEST(UncertaintySigma, FormulaValues) {
    EXPECT_NEAR(uncertainty_sigma_f(1.0, 99), 0.005, 1e-15);
    EXPECT_NEAR(uncertainty_sigma_f(0.5, 0), 0.5, 1e-15);
    EXPECT_NEAR(uncertainty_sigma_f(0.5, 1e8) * 2 * std::sqrt(1e8), 1.0, 1e-3);
    EXPECT_THROW(uncertainty_sigma_f(1.5, 3), std::invalid_argument);
}

TEST(ReadoutExperiment, PerfectModel) {
    ReadoutExperimentResult r = readout_fidelity_experiment(MarkovReadoutModel::perfect(), ReadoutPolicy::paper(), 2000, 1);
    for (int n = 0; n < kNumNuclei; ++n) {
        EXPECT_DOUBLE_EQ(r.fidelity[n], 1.0);
        EXPECT_DOUBLE_EQ(r.retention[n], 1.0);
    }
    EXPECT_EQ(r.retained, r.repetitions);
}

TEST(ReadoutExperiment, CalibratedModelHitsPostselectedTargets) {
    ReadoutExperimentResult r = exact_readout_experiment(MarkovReadoutModel::calibrated(), ReadoutPolicy::paper());
    EXPECT_NEAR(r.fidelity[0], 0.9946, 0.0005);
    EXPECT_NEAR(r.fidelity[1], 0.9942, 0.0005);
    EXPECT_NEAR(r.fidelity[2], 0.9957, 0.0005);
    EXPECT_NEAR(r.combined_retention, 0.33, 0.03);
}

TEST(ReadoutExperiment, MonteCarloMatchesExact) {
    auto model = MarkovReadoutModel::calibrated();
    auto policy = ReadoutPolicy::paper();
    ReadoutExperimentResult exact = exact_readout_experiment(model, policy);
    ReadoutExperimentResult mc = readout_fidelity_experiment(model, policy, 200000, 5, 4);
    for (int n = 0; n < kNumNuclei; ++n) {
        EXPECT_NEAR(mc.fidelity[n], exact.fidelity[n], 3 * mc.sigma[n] + 1e-9) << n;
    }
    double sr = std::sqrt(exact.combined_retention * (1 - exact.combined_retention) / 200000);
    EXPECT_NEAR(mc.combined_retention, exact.combined_retention, 3 * sr);
}

TEST(ReadoutExperiment, ZeroThresholdKeepsEverythingAndLosesFidelity) {
    auto model = MarkovReadoutModel::calibrated();
    ReadoutPolicy open = ReadoutPolicy::paper();
    open.f_th = 0.0;
    ReadoutExperimentResult a = exact_readout_experiment(model, open);
    ReadoutExperimentResult b = exact_readout_experiment(model, ReadoutPolicy::paper());
    EXPECT_NEAR(a.combined_retention, 1.0, 1e-12);
    EXPECT_LT(a.combined_fidelity, b.combined_fidelity);
}

TEST(ReadoutExperiment, SeedReproducesAcrossThreadCounts) {
    auto model = MarkovReadoutModel::calibrated();
    auto policy = ReadoutPolicy::paper();
    auto a = readout_fidelity_experiment(model, policy, 20000, 9, 1);
    auto b = readout_fidelity_experiment(model, policy, 20000, 9, 4);
    EXPECT_EQ(a.retained, b.retained);
    EXPECT_EQ(a.fidelity, b.fidelity);
}

TEST(ReadoutParams, Validation) {
    EXPECT_THROW((NucleusReadoutParams{1.2, 0.0, 0.0}.validate()), std::invalid_argument);
    ReadoutPolicy p;
    p.shots[1] = 0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace spinreg
