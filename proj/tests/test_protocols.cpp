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
#include <numbers>
#include <sstream>

#include "spinreg/circuits.hpp"
#include "spinreg/clifford.hpp"
#include "spinreg/est.hpp"
#include "spinreg/fit.hpp"
#include "spinreg/ramsey.hpp"
#include "spinreg/rb.hpp"
#include "spinreg/tomography.hpp"

namespace spinreg {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Clifford1Q, GroupSizeAndGateCount) {
    const auto &g = CliffordGroup1Q::instance();
    EXPECT_EQ(g.size(), 24);
    EXPECT_DOUBLE_EQ(g.mean_physical_gates(), 1.875);
}

TEST(Clifford1Q, GateSequencesReproduceMatrices) {
    const auto &g = CliffordGroup1Q::instance();
    for (const auto &c : g.elements()) {
        Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
        for (NativeGate gate : c.gates) {
            m = native_matrix(gate) * m;
        }
        EXPECT_LT(phase_aligned_distance(m, c.matrix), 1e-12) << c.index;
    }
}

TEST(Clifford1Q, ClosureAndInverses) {
    const auto &g = CliffordGroup1Q::instance();
    for (int a = 0; a < g.size(); ++a) {
        for (int b = 0; b < g.size(); ++b) {
            int ab = g.compose(a, b);
            EXPECT_EQ(ab, g.find(g.element(b).matrix * g.element(a).matrix));
        }
        EXPECT_EQ(g.compose(a, g.inverse(a)), g.identity_index());
    }
}

Eigen::Matrix4cd layered_matrix(const Clifford2Q &c) {
    const auto &g = CliffordGroup1Q::instance();
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
    for (const auto &layer : c.layers) {
        Eigen::Matrix4cd local = kron(g.element(layer.local_a).matrix, g.element(layer.local_b).matrix);
        m = local * m;
        if (layer.cz_after) {
            m = native_cz_matrix() * m;
        }
    }
    return m;
}

TEST(Clifford2Q, SizeAndEntanglerStatistics) {
    const auto &g = CliffordGroup2Q::instance();
    EXPECT_EQ(g.size(), 11520);
    auto sizes = g.class_sizes();
    EXPECT_EQ(sizes[0], 576);
    EXPECT_EQ(sizes[1], 5184);
    EXPECT_EQ(sizes[2], 5184);
    EXPECT_EQ(sizes[3], 576);
    EXPECT_DOUBLE_EQ(g.mean_cz(), 1.5);
}

TEST(Clifford2Q, LayersReproduceMatrices) {
    const auto &g = CliffordGroup2Q::instance();
    for (int i = 0; i < g.size(); i += 7) {
        const auto &c = g.element(i);
        EXPECT_LT(phase_aligned_distance(layered_matrix(c), c.matrix), 1e-10) << i;
        EXPECT_EQ(static_cast<int>(c.layers.size()), c.cz_count + 1);
    }
}

TEST(Clifford2Q, RandomProductsStayInGroup) {
    const auto &g = CliffordGroup2Q::instance();
    Rng rng(8);
    for (int k = 0; k < 500; ++k) {
        int a = static_cast<int>(rng() % g.size());
        int b = static_cast<int>(rng() % g.size());
        EXPECT_GE(g.find(g.element(a).matrix * g.element(b).matrix), 0);
        EXPECT_GE(g.find(g.element(a).matrix.adjoint()), 0);
    }
}

TEST(Clifford2Q, PhysicalGateScheduleCountsCz) {
    const auto &g = CliffordGroup2Q::instance();
    for (int i : {0, 600, 6000, 11519}) {
        const auto &c = g.element(i);
        for (LayerSchedule s : {LayerSchedule::Alternate, LayerSchedule::Serial}) {
            int cz = 0;
            for (const auto &pg : physical_gates(c, 1, 2, s)) {
                cz += pg.cz;
                if (!pg.cz) {
                    EXPECT_TRUE(pg.qubit == 1 || pg.qubit == 2);
                    EXPECT_NE(pg.gate, NativeGate::I);
                }
            }
            EXPECT_EQ(cz, c.cz_count);
        }
    }
    EXPECT_THROW(parse_layer_schedule("zigzag"), std::invalid_argument);
}

TEST(Est, InitializesEveryTargetFromEveryStart) {
    Device dev;
    for (int target = 0; target < kNumConfigs; ++target) {
        GateSchedule s = est_initialize(dev, NuclearConfig(target));
        for (int start = 0; start < kNumConfigs; ++start) {
            for (Spin e : {Spin::Down, Spin::Up}) {
                PureState psi = PureState::basis((e == Spin::Up ? 8 : 0) + start);
                Rng rng(target * 16 + start);
                TrajectoryLog log;
                run_schedule(dev, psi, s, NoiseSample{}, &rng, &log);
                EXPECT_NEAR(psi.probability(target), 1.0, 1e-12) << target << " from " << start;
                ASSERT_FALSE(log.readouts.empty());
                EXPECT_EQ(log.readouts.back(), NuclearConfig(target));
            }
        }
    }
}

TEST(Est, FlipErrorsShowUpInVerification) {
    Device dev;
    GateSchedule s = est_initialize(dev, NuclearConfig(0), 0.2);
    int wrong = 0;
    for (int k = 0; k < 400; ++k) {
        PureState psi = PureState::basis(7);
        Rng rng(k);
        TrajectoryLog log;
        run_schedule(dev, psi, s, NoiseSample{}, &rng, &log);
        wrong += log.readouts.back() != NuclearConfig(0);
    }
    EXPECT_GT(wrong, 100);
    EXPECT_LT(wrong, 400);
}

TEST(FitDecay, RecoversSyntheticParameters) {
    std::vector<double> n, y;
    for (int l : {1, 10, 25, 50, 100, 200, 350, 500}) {
        n.push_back(l);
        y.push_back(0.47 * std::pow(0.9971, l) + 0.51);
    }
    DecayFit f = fit_decay(n, y);
    EXPECT_NEAR(f.f, 0.9971, 1e-8);
    EXPECT_NEAR(f.a, 0.47, 1e-6);
    EXPECT_NEAR(f.b, 0.51, 1e-6);
    const double half = 0.5;
    std::vector<double> y2;
    for (double l : n) {
        y2.push_back(0.5 * std::pow(0.99, l) + 0.5);
    }
    EXPECT_NEAR(fit_decay(n, y2, &half).f, 0.99, 1e-9);
    EXPECT_THROW(fit_decay({1.0}, {0.9}), std::invalid_argument);
}

TEST(FitRamsey, RecoversSyntheticParameters) {
    std::vector<double> t = linspace(0.0, 60e-6, 121);
    std::vector<double> p;
    Rng rng(3);
    std::normal_distribution<double> noise(0.0, 0.005);
    for (double x : t) {
        p.push_back(ramsey_model(x, 0.48, 2 * kPi * 1.0e5, 0.3, 0.5, 28.1e-6) + noise(rng));
    }
    RamseyFit f = fit_ramsey(t, p);
    EXPECT_NEAR(f.t2_star / 28.1e-6, 1.0, 0.03);
    EXPECT_NEAR(f.omega / (2 * kPi * 1.0e5), 1.0, 0.01);
}

TEST(LevenbergMarquardt, ExponentialModel) {
    std::vector<double> x, y;
    for (int k = 0; k < 30; ++k) {
        x.push_back(0.1 * k);
        y.push_back(2.5 * std::exp(-1.3 * x.back()) + 0.2);
    }
    auto model = [](double t, const std::vector<double> &p) { return p[0] * std::exp(-p[1] * t) + p[2]; };
    FitResult r = levenberg_marquardt(model, x, y, {1.0, 1.0, 0.0});
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.params[0], 2.5, 1e-8);
    EXPECT_NEAR(r.params[1], 1.3, 1e-8);
    EXPECT_NEAR(r.params[2], 0.2, 1e-8);
}

TEST(Ramsey, SimulatedElectronT2StarMatchesCalibration) {
    Device dev;
    RamseyOptions o;
    o.detuning_hz = 100e3;
    o.noise_samples = 4000;
    Curve c = simulate_ramsey(dev, NoiseParams::from_calibration(dev.calibration), 0, linspace(0.0, 60e-6, 121), o);
    RamseyFit f = fit_ramsey(c.t, c.p_up);
    EXPECT_NEAR(f.t2_star / 28.1e-6, 1.0, 0.10);
}

TEST(Ramsey, SimulatedNuclearT2StarMatchesCalibration) {
    Device dev;
    RamseyOptions o;
    o.detuning_hz = 10e3;
    o.noise_samples = 4000;
    Curve c = simulate_ramsey(dev, NoiseParams::from_calibration(dev.calibration), 2, linspace(0.0, 1.0e-3, 161), o);
    RamseyFit f = fit_ramsey(c.t, c.p_up);
    EXPECT_NEAR(f.t2_star / 490e-6, 1.0, 0.10);
}

TEST(Ramsey, NoiselessRabiOscillatesAtCalibratedFrequency) {
    Device dev;
    RamseyOptions o;
    Curve c = simulate_rabi(dev, NoiseParams::off(), 1, linspace(0.0, 300e-6, 151), o);
    RabiFit f = fit_rabi(c.t, c.p_up);
    EXPECT_NEAR(f.omega / (2 * kPi * 11.22e3), 1.0, 1e-3);
}

RbOptions short_rb() {
    RbOptions o;
    o.lengths = {1, 5, 10, 20, 40};
    o.variations = 10;
    o.noise_samples = 1;
    o.noise = false;
    return o;
}

TEST(Rb, NoiselessSingleQubitIsPerfect) {
    Device dev;
    for (int q = 0; q <= 3; ++q) {
        SingleQubitRbResult r = single_qubit_rb(dev, NoiseParams::off(), q, short_rb());
        for (double s : r.curve.survival) {
            EXPECT_NEAR(s, 1.0, 1e-9);
        }
        EXPECT_NEAR(r.gate_fidelity, 1.0, 1e-9);
        EXPECT_DOUBLE_EQ(r.gates_per_clifford, 1.875);
    }
}

TEST(Rb, NoiselessTwoQubitIsPerfect) {
    Device dev;
    RbOptions o = short_rb();
    o.variations = 3;
    TwoQubitRbResult r = two_qubit_rb(dev, NoiseParams::off(), 1, 3, o);
    EXPECT_NEAR(r.reference_fidelity, 1.0, 1e-9);
    EXPECT_NEAR(r.cz_fidelity, 1.0, 1e-9);
}

TEST(Rb, DepolarizingRecoversAnalyticInfidelity) {
    Device dev;
    for (double p : {1e-3, 1e-2}) {
        RbOptions o;
        o.noise = false;
        o.depolarizing = p;
        o.threads = 4;
        SingleQubitRbResult r = single_qubit_rb(dev, NoiseParams::off(), 1, o);
        EXPECT_NEAR((1.0 - r.gate_fidelity) / (p / 2), 1.0, 0.2) << p;
    }
}

TEST(Rb, QuasistaticSingleQubitFidelitiesAreHigh) {
    Device dev;
    RbOptions o;
    o.threads = 4;
    for (int q = 0; q <= 3; ++q) {
        SingleQubitRbResult r = single_qubit_rb(dev, NoiseParams::from_calibration(dev.calibration), q, o);
        EXPECT_GT(r.gate_fidelity, 0.999) << q;
        EXPECT_LT(r.gate_fidelity, 1.0) << q;
    }
}

TEST(Rb, SequentialShortLengths) {
    Device dev;
    RbOptions o;
    o.lengths = {1, 2, 4, 8, 16, 24, 32, 48};
    o.variations = 40;
    o.noise_samples = 20;
    o.threads = 4;
    SequentialRbResult r = sequential_rb(dev, NoiseParams::from_calibration(dev.calibration), o);
    EXPECT_NEAR(r.nuclei[1].gate_fidelity, 0.9960, 0.003);
    for (const auto &n : r.nuclei) {
        EXPECT_GT(n.gate_fidelity, 0.995);
    }
}

TEST(Rb, CurveCsvAndValidation) {
    DecayCurve c{{1, 2}, {0.99, 0.98}, {0.01, 0.01}, {10, 10}};
    std::ostringstream out;
    write_curve_csv(out, c);
    EXPECT_NE(out.str().find("0.98"), std::string::npos);
    RbOptions bad;
    bad.variations = 0;
    EXPECT_THROW(single_qubit_rb(Device{}, NoiseParams::off(), 1, bad), std::invalid_argument);
}

PureState random_nuclear_state(Rng &rng) {
    std::normal_distribution<double> g;
    Vector v = Vector::Zero(16);
    for (int k = 0; k < 8; ++k) {
        v[k] = Complex(g(rng), g(rng));
    }
    return PureState::from_amplitudes(v / v.norm());
}

TEST(Tomography, ExactDataRecoversStateExactly) {
    Device dev;
    Rng rng(17);
    for (int k = 0; k < 5; ++k) {
        PureState psi = random_nuclear_state(rng);
        TomographyData data = exact_tomography_data(dev, psi, TomographySettings::full({1, 2, 3}));
        DensityOperator truth = nuclear_density(psi, {1, 2, 3});
        EXPECT_LT(trace_distance(DensityOperator(linear_inversion(data)), truth), 1e-9);
        EXPECT_LT(trace_distance(reconstruct(data), truth), 1e-9);
    }
    PureState bell;
    run_schedule(dev, bell, bell_circuit(dev, 2, 3, BellState::PsiPlus), NoiseSample{});
    TomographyData data = exact_tomography_data(dev, bell, TomographySettings::full({2, 3}));
    EXPECT_LT(trace_distance(DensityOperator(linear_inversion(data)), DensityOperator::from_pure(
                                                                          bell_pair_state(BellState::PsiPlus))),
              1e-9);
}

TEST(Tomography, SettingsAndExpectations) {
    TomographySettings s = TomographySettings::full({1, 2, 3});
    EXPECT_EQ(s.num_settings(), 27);
    EXPECT_EQ(s.num_outcomes(), 8);
    Device dev;
    auto e = pauli_expectations(exact_tomography_data(dev, PureState(), s));
    EXPECT_EQ(e.size(), 64u);
    EXPECT_NEAR(e.at("ZZZ"), 1.0, 1e-12);
    EXPECT_NEAR(e.at("XII"), 0.0, 1e-12);
    TomographySettings bad = s;
    bad.rotation_order = {1, 1, 2};
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Tomography, NearestPhysicalIsPsdAndIdempotent) {
    Matrix m = Matrix::Zero(4, 4);
    m.diagonal() << 0.7, 0.5, -0.1, -0.1;
    DensityOperator rho = nearest_physical(m);
    EXPECT_GE(rho.eigenvalues().minCoeff(), -1e-12);
    EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-12);
    EXPECT_LT((nearest_physical(rho.matrix()).matrix() - rho.matrix()).norm(), 1e-12);
}

QstOptions ideal_qst(std::uint64_t shots, std::uint64_t seed) {
    QstOptions o;
    o.shots_per_setting = shots;
    o.seed = seed;
    o.noise = false;
    o.markov_readout = false;
    o.bootstrap = 0;
    return o;
}

TEST(Tomography, FiniteShotGhzFidelity) {
    Device dev;
    auto settings = TomographySettings::full({1, 2, 3});
    auto run = [&](std::uint64_t shots) {
        return qst(dev, ghz_circuit(dev), settings, ghz_nuclear_state(), NoiseParams::off(),
                   MarkovReadoutModel::perfect(), ReadoutPolicy::paper(), ideal_qst(shots, 5));
    };
    QstResult r3 = run(1000);
    QstResult r4 = run(10000);
    QstResult r5 = run(100000);
    EXPECT_GE(r4.fidelity, 0.995);
    EXPECT_LE(1.0 - r5.fidelity, 1.0 - r3.fidelity + 1e-12);
    EXPECT_GE(r5.rho.eigenvalues().minCoeff(), -1e-10);
    std::ostringstream csv;
    write_counts_csv(csv, r4.data);
    EXPECT_NE(csv.str().find("XXX"), std::string::npos);
}

TEST(Tomography, BootstrapGivesUncertainty) {
    Device dev;
    QstOptions o = ideal_qst(2000, 3);
    o.bootstrap = 20;
    QstResult r = qst(dev, bell_circuit(dev, 1, 2, BellState::PhiPlus), TomographySettings::full({1, 2}),
                      bell_pair_state(BellState::PhiPlus), NoiseParams::off(), MarkovReadoutModel::perfect(),
                      ReadoutPolicy::paper(), o);
    EXPECT_GT(r.sigma, 0.0);
    EXPECT_LT(r.sigma, 0.02);
    EXPECT_GT(r.fidelity, 0.98);
}

TEST(Circuits, TomographyTargetNames) {
    EXPECT_EQ(tomography_target("ghz").qubits, (std::vector<int>{1, 2, 3}));
    EXPECT_EQ(tomography_target("bell-psi-minus-13").qubits, (std::vector<int>{1, 3}));
    EXPECT_THROW(tomography_target("w-state"), std::invalid_argument);
}

}  // namespace
}  // namespace spinreg
