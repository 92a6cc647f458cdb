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

#include <cmath>
#include <set>

#include "spinreg/register.hpp"

namespace spinreg {
namespace {

TEST(NuclearConfig, ParsesAndPrints) {
    NuclearConfig c = NuclearConfig::parse("101");
    EXPECT_EQ(c.bits(), 5);
    EXPECT_EQ(c.spin(1), Spin::Up);
    EXPECT_EQ(c.spin(2), Spin::Down);
    EXPECT_EQ(c.to_string(), "101");
    EXPECT_THROW(NuclearConfig::parse("12"), std::invalid_argument);
    EXPECT_THROW(NuclearConfig::parse("0101"), std::invalid_argument);
}

TEST(EsrOffset, AllDownSitsAtMinusHalfTheCouplings) {
    RegisterParams p;
    EXPECT_NEAR(esr_offset(p, NuclearConfig::parse("000")), -88.5e6, 1e-3);
    EXPECT_NEAR(esr_offset(p, NuclearConfig::parse("111")), 88.5e6, 1e-3);
    EXPECT_NEAR(esr_offset(p, NuclearConfig::parse("100")) - esr_offset(p, NuclearConfig::parse("000")), 6e6, 1e-6);
}

TEST(EsrOffset, FlippingNucleusAddsItsCoupling) {
    RegisterParams p;
    for (int c = 0; c < kNumConfigs; ++c) {
        NuclearConfig cfg(c);
        for (int n = 1; n <= kNumNuclei; ++n) {
            if (cfg.spin(n) == Spin::Down) {
                EXPECT_NEAR(esr_offset(p, cfg.with_spin(n, Spin::Up)) - esr_offset(p, cfg), p.hyperfine_hz[n - 1],
                            1e-6);
            }
        }
    }
}

TEST(TransitionTable, EightDistinctEsrAndSixNmr) {
    TransitionTable t = transition_table(RegisterParams{});
    std::set<double> esr(t.esr.begin(), t.esr.end());
    EXPECT_EQ(esr.size(), 8u);
    EXPECT_EQ(t.nmr.size(), 6u);
}

TEST(NmrFrequency, DecoupledLimitAndBranchSplitting) {
    RegisterParams p;
    const double gb = p.gamma_n_hz_per_t * p.b0_tesla;
    RegisterParams zero = p;
    zero.hyperfine_hz = {1e-9, 1e-9, 1e-9};
    EXPECT_NEAR(nmr_frequency(zero, 1, Spin::Down), gb, 1e-6);
    EXPECT_NEAR(nmr_frequency(zero, 1, Spin::Up), gb, 1e-6);
    // gamma_n B0 = 24.98 MHz, n3 with electron down: |24.98 - 51.5| MHz.
    EXPECT_NEAR(nmr_frequency(p, 3, Spin::Down), std::abs(gb - 51.5e6), 1.0);
    EXPECT_NEAR(nmr_frequency(p, 3, Spin::Down), 26.52e6, 0.01e6);
    for (int n = 1; n <= kNumNuclei; ++n) {
        EXPECT_NEAR(nmr_frequency(p, n, Spin::Up), gb + 0.5 * p.hyperfine_hz[n - 1], 1e-6);
        EXPECT_NEAR(nmr_frequency(p, n, Spin::Down), std::abs(gb - 0.5 * p.hyperfine_hz[n - 1]), 1e-6);
    }
}

TEST(RegisterParams, RejectsInvalid) {
    RegisterParams p;
    p.b0_tesla = 0.0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = RegisterParams{};
    p.hyperfine_hz[1] = -1.0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = RegisterParams{};
    p.b0_tesla = 1e-4;  // gamma_e B0 no longer dominates the couplings
    EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(QualityFactors, MatchCalibrationProducts) {
    auto q = quality_factors(QubitCalibration::table_s3());
    EXPECT_NEAR(q[0].qubit, 4.82, 0.005);
    EXPECT_NEAR(q[1].qubit, 14.14, 0.005);
    ASSERT_TRUE(q[2].gate.has_value());
    EXPECT_NEAR(*q[2].gate, 84.56, 0.01);
    // Calibration products, not the rounded headline numbers.
    ASSERT_TRUE(q[0].gate.has_value());
    EXPECT_NEAR(*q[0].gate, 0.191e-3 * 171.57e3, 1e-9);
    ASSERT_TRUE(q[1].gate.has_value());
    EXPECT_NEAR(*q[1].gate, 71.75e-3 * 11.22e3, 1e-9);
}

TEST(QubitCalibration, TableValues) {
    auto cal = QubitCalibration::table_s3();
    EXPECT_DOUBLE_EQ(cal.electron_for(NuclearConfig(0)).f_rabi_hz, 171.57e3);
    EXPECT_DOUBLE_EQ(cal.electron_for(NuclearConfig(0)).t2_star_s, 28.10e-6);
    EXPECT_DOUBLE_EQ(cal.electron_for(NuclearConfig(4)).f_rabi_hz, 168.63e3);
    EXPECT_DOUBLE_EQ(cal.nucleus(2).t2_star_s, 490e-6);
    EXPECT_DOUBLE_EQ(cal.nucleus(3).f_rabi_hz, 31.44e3);
    EXPECT_DOUBLE_EQ(cal.electron_f_rabi_fallback_hz, 171.0e3);
    EXPECT_NEAR(cal.nuclear_pi_half_s(1), 1.0 / (4 * 11.22e3), 1e-15);
    for (int c = 0; c < kNumConfigs; ++c) {
        EXPECT_GE(cal.electron[c].f_rabi_hz, 168.63e3);
        EXPECT_LE(cal.electron[c].f_rabi_hz, 172.27e3);
    }
}

TEST(QubitCalibration, RejectsNonPositive) {
    auto cal = QubitCalibration::table_s3();
    cal.nuclei[0].t2_star_s = 0.0;
    EXPECT_THROW(cal.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace spinreg
