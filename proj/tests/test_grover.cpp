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
#include <numbers>

#include "spinreg/grover.hpp"

namespace spinreg {
namespace {

TEST(OptimalIterations, Examples) {
    EXPECT_EQ(optimal_iterations(3, 1), 2);
    EXPECT_EQ(optimal_iterations(3, 2), 1);
    EXPECT_EQ(optimal_iterations(1, 1), 0);
    EXPECT_THROW(optimal_iterations(3, 0), std::invalid_argument);
    EXPECT_THROW(optimal_iterations(3, 8), std::invalid_argument);
}

TEST(OptimalIterations, IsEarliestLocalMaximum) {
    for (int n = 2; n <= 8; ++n) {
        for (int m = 1; m < (1 << n); m = 2 * m + 1) {
            int r = optimal_iterations(n, m);
            EXPECT_GE(ideal_success(n, m, r) + 1e-12, ideal_success(n, m, r + 1));
            for (int k = 0; k < r; ++k) {
                EXPECT_LT(ideal_success(n, m, k), ideal_success(n, m, k + 1) + 1e-12);
            }
        }
    }
}

TEST(IdealSuccess, TabulatedValues) {
    EXPECT_NEAR(ideal_success(3, 1, 2), 0.9453, 1e-4);
    EXPECT_NEAR(ideal_success(3, 1, 1), 0.781, 1e-3);
    EXPECT_NEAR(ideal_success(5, 1, 1), 0.258, 1e-3);
    EXPECT_NEAR(ideal_success(3, 2, 1), 1.0, 1e-12);
    // Closed form: sin^2(5 asin(1 / sqrt 8)).
    EXPECT_NEAR(ideal_success(3, 1, 2), std::pow(std::sin(5 * std::asin(1 / std::sqrt(8.0))), 2), 1e-15);
}

TEST(GroverSchedule, SingleMarkedStateTwoIterations) {
    Device dev;
    GroverSpec spec;
    auto p = grover_distribution(spec, dev);
    EXPECT_NEAR(p[0], 0.9453125, 1e-6);
    double total = 0.0;
    for (double x : p) {
        total += x;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(GroverSchedule, TwoMarkedStatesOneIteration) {
    Device dev;
    GroverSpec spec;
    spec.marked = {NuclearConfig::parse("001"), NuclearConfig::parse("110")};
    EXPECT_EQ(spec.resolved_iterations(), 1);
    auto p = grover_distribution(spec, dev);
    EXPECT_NEAR(p[1] + p[6], 1.0, 1e-9);
}

TEST(GroverSchedule, ZeroIterationsIsUniform) {
    Device dev;
    GroverSpec spec;
    spec.iterations = 0;
    for (double x : grover_distribution(spec, dev)) {
        EXPECT_NEAR(x, 0.125, 1e-12);
    }
}

TEST(GroverSchedule, FollowsSineSquaredLaw) {
    Device dev;
    const std::vector<std::vector<int>> sets{{5}, {2, 7}, {0, 3, 5, 6}};
    for (const auto &set : sets) {
        for (int r = 0; r <= 6; ++r) {
            GroverSpec spec;
            spec.marked.clear();
            for (int c : set) {
                spec.marked.emplace_back(c);
            }
            spec.iterations = r;
            auto p = grover_distribution(spec, dev);
            double hit = 0.0;
            for (int c : set) {
                hit += p[c];
            }
            EXPECT_NEAR(hit, ideal_success(3, static_cast<int>(set.size()), r), 1e-9) << set.size() << " r=" << r;
        }
    }
}

TEST(GroverSchedule, PermutationCovariance) {
    Device dev;
    GroverSpec base;
    auto p0 = grover_distribution(base, dev);
    for (int c = 1; c < kNumConfigs; ++c) {
        GroverSpec spec;
        spec.marked = {NuclearConfig(c)};
        auto p = grover_distribution(spec, dev);
        for (int k = 0; k < kNumConfigs; ++k) {
            EXPECT_NEAR(p[k ^ c], p0[k], 1e-12);
        }
    }
}

TEST(GroverSchedule, OracleIsInvolution) {
    Device dev;
    for (int c = 0; c < kNumConfigs; ++c) {
        Matrix u = conditional_esr_2pi(dev, NuclearConfig(c), 0.0).matrix();
        EXPECT_LT((u * u - Matrix::Identity(16, 16)).norm(), 1e-12);
    }
}

TEST(GroverSpec, Validation) {
    GroverSpec spec;
    spec.marked = {};
    EXPECT_THROW(spec.validate(), std::invalid_argument);
    spec.marked = {NuclearConfig(1), NuclearConfig(1)};
    EXPECT_THROW(spec.validate(), std::invalid_argument);
    spec.marked = {NuclearConfig(9)};
    EXPECT_THROW(spec.validate(), std::invalid_argument);
}

TEST(RunGrover, NoiselessMatchesExactDistribution) {
    Device dev;
    GroverSpec spec;
    spec.marked = {NuclearConfig(3)};
    GroverRunOptions o;
    o.noise = false;
    o.markov_readout = false;
    o.verify_init = false;
    o.trajectories = 20000;
    GroverResult r = run_grover(spec, dev, NoiseParams::off(), MarkovReadoutModel::perfect(), ReadoutPolicy::paper(), o);
    auto p = grover_distribution(spec, dev);
    EXPECT_EQ(r.retained, r.trajectories);
    for (int k = 0; k < kNumConfigs; ++k) {
        double sigma = std::sqrt(p[k] * (1 - p[k]) / o.trajectories);
        EXPECT_NEAR(static_cast<double>(r.histogram[k]) / o.trajectories, p[k], 5 * sigma + 1e-12);
    }
    EXPECT_NEAR(r.ideal, ideal_success(3, 1, 2), 1e-12);
}

TEST(RunGrover, NoisyMarkedAllDownRatio) {
    Device dev;
    GroverSpec spec;
    GroverRunOptions o;
    o.threads = 4;
    GroverResult r = run_grover(spec, dev, NoiseParams::from_calibration(dev.calibration),
                                MarkovReadoutModel::calibrated(), ReadoutPolicy::paper(), o);
    // Converges near 0.991 with more trajectories.
    EXPECT_GE(r.ratio, 0.92);
    EXPECT_LE(r.ratio, 0.995);
    EXPECT_GT(r.retained, 0u);
    EXPECT_LT(r.retained, r.trajectories);
}

TEST(RunGrover, ThreadCountDoesNotChangeResult) {
    Device dev;
    GroverSpec spec;
    spec.marked = {NuclearConfig(6)};
    GroverRunOptions o;
    o.trajectories = 2000;
    o.seed = 42;
    auto noise = NoiseParams::from_calibration(dev.calibration);
    auto model = MarkovReadoutModel::calibrated();
    GroverResult a = run_grover(spec, dev, noise, model, ReadoutPolicy::paper(), o);
    o.threads = 3;
    GroverResult b = run_grover(spec, dev, noise, model, ReadoutPolicy::paper(), o);
    EXPECT_EQ(a.histogram, b.histogram);
    EXPECT_EQ(a.retained, b.retained);
}

TEST(ErrorBudget, TableTotals) {
    Device dev;
    BenchmarkFidelities bench;
    ErrorBudget computed = error_budget(grover_budget_entries(dev, bench, true));
    EXPECT_NEAR(computed.total_without_idle, 0.9589, 2e-4);
    EXPECT_NEAR(computed.total_with_idle, 0.9323, 5e-4);
    ErrorBudget table = error_budget(grover_budget_entries(dev, bench, false));
    EXPECT_NEAR(table.total_with_idle, 0.9323, 5e-4);
    for (int n = 0; n < kNumNuclei; ++n) {
        const auto &e = std::find_if(computed.entries.begin(), computed.entries.end(), [&](const BudgetEntry &b) {
            return b.idle && b.label.rfind("n" + std::to_string(n + 1) + " ", 0) == 0;
        });
        ASSERT_NE(e, computed.entries.end());
        EXPECT_NEAR(e->fidelity, bench.table_idle[n], 1e-4);
        EXPECT_EQ(e->count, 4);
    }
}

TEST(ErrorBudget, TrivialAndReorderInvariant) {
    std::vector<BudgetEntry> ones{{"a", 3, 1.0, false}, {"b", 2, 1.0, true}};
    EXPECT_DOUBLE_EQ(error_budget(ones).total_with_idle, 1.0);
    Device dev;
    auto entries = grover_budget_entries(dev, BenchmarkFidelities{});
    double forward = error_budget(entries).total_with_idle;
    std::reverse(entries.begin(), entries.end());
    EXPECT_NEAR(error_budget(entries).total_with_idle, forward, 1e-15);
    EXPECT_THROW(error_budget({}), std::invalid_argument);
    EXPECT_THROW(error_budget({{"x", 1, 1.2, false}}), std::invalid_argument);
}

}  // namespace
}  // namespace spinreg
