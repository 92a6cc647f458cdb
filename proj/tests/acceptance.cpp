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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. An optional first argument names the
// spinreg CLI binary used for the command-line determinism check.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "spinreg/circuits.hpp"
#include "spinreg/clifford.hpp"
#include "spinreg/device_config.hpp"
#include "spinreg/experiment.hpp"
#include "spinreg/grover.hpp"
#include "spinreg/rb.hpp"
#include "spinreg/readout.hpp"
#include "spinreg/tomography.hpp"

namespace {

using namespace spinreg;
namespace fs = std::filesystem;

int failures = 0;

void report(int criterion, bool pass, const std::string &detail) {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    failures += pass ? 0 : 1;
}

std::string fmt(const char *f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

void criterion1(const Device &dev) {
    Stopwatch clock;
    GroverSpec spec;
    spec.iterations = 2;
    double p = grover_distribution(spec, dev)[0];
    double t = clock.seconds();
    report(1, std::abs(p - 0.9453) <= 1e-4 && t < 1.0,
           fmt("noiseless Grover r=2 success %.6f (0.9453 +- 1e-4), %.3f s", p, t));
}

void criterion2(const Device &dev) {
    GroverSpec spec;
    spec.marked = {NuclearConfig::parse("001"), NuclearConfig::parse("110")};
    spec.iterations = 1;
    auto p = grover_distribution(spec, dev);
    double joint = p[1] + p[6];
    report(2, std::abs(joint - 1.0) <= 1e-9, fmt("two marked states r=1 joint success %.12f", joint));
}

void criterion3(const Device &dev) {
    Stopwatch clock;
    const double tau = 1.0 / 171.0e3;
    const double t2 = 31.7e-6;
    double analytic = expected_cz_error(tau, t2);
    Device d = dev;
    d.calibration.electron[0].f_rabi_hz = 171.0e3;
    const int idx[] = {0, 2, 4, 6};
    Rng rng(derive_seed(3, 0));
    const int n = 100000;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        Matrix u = conditional_esr_2pi(d, NuclearConfig(0), sample_detuning(t2, rng)).matrix();
        Complex tr = 0.0;
        for (int a = 0; a < 4; ++a) {
            // Ideal projection is diag(-1, 1, 1, 1).
            tr += (a == 0 ? -1.0 : 1.0) * u(idx[a], idx[a]);
        }
        sum += 1.0 - std::norm(tr) / 16.0;
    }
    double mc = sum / n;
    double t = clock.seconds();
    bool pass = std::abs(analytic - 0.0032) <= 0.0002 && std::abs(mc / analytic - 1.0) <= 0.10 && t < 10.0;
    report(3, pass, fmt("expected CZ error %.4f%% (0.32 +- 0.02%%), Monte-Carlo %.4f%% (rel %.2f%%), %.2f s",
                        100 * analytic, 100 * mc, 100 * (mc / analytic - 1.0), t));
}

void criterion4(const Device &dev) {
    BenchmarkFidelities bench;
    auto entries = grover_budget_entries(dev, bench, true);
    ErrorBudget b = error_budget(entries);
    bool idle_ok = true;
    std::string idle;
    int n = 0;
    for (const auto &e : entries) {
        if (e.idle) {
            idle_ok = idle_ok && std::abs(e.fidelity - bench.table_idle[n]) <= 1e-4;
            idle += fmt(" %.4f%%", 100 * e.fidelity);
            ++n;
        }
    }
    bool pass = std::abs(b.total_without_idle - 0.9589) <= 2e-4 && std::abs(b.total_with_idle - 0.9323) <= 5e-4 &&
                idle_ok && n == kNumNuclei;
    report(4, pass,
           fmt("budget %.4f%% without idle, %.4f%% with idle; idle rows", 100 * b.total_without_idle,
               100 * b.total_with_idle) +
               idle);
}

void criterion5() {
    const auto &g1 = CliffordGroup1Q::instance();
    const auto &g2 = CliffordGroup2Q::instance();
    bool pass = g1.size() == 24 && g1.mean_physical_gates() == 1.875 && g2.size() == 11520 && g2.mean_cz() == 1.5;
    report(5, pass,
           fmt("1Q group %d, %.4f gates per Clifford; 2Q group %d, %.4f CZ per Clifford", g1.size(),
               g1.mean_physical_gates(), g2.size(), g2.mean_cz()));
}

void criterion6(const Device &dev) {
    Stopwatch clock;
    bool pass = true;
    std::string detail;
    for (double p : {1e-3, 1e-2}) {
        RbOptions o;
        o.noise = false;
        o.depolarizing = p;
        o.threads = 4;
        SingleQubitRbResult r = single_qubit_rb(dev, NoiseParams::off(), 1, o);
        double rel = (1.0 - r.gate_fidelity) / (p / 2) - 1.0;
        pass = pass && std::abs(rel) <= 0.2;
        detail += fmt("p=%g infidelity %.3e vs %.3e (rel %+.1f%%); ", p, 1.0 - r.gate_fidelity, p / 2, 100 * rel);
    }
    RbOptions o;
    o.variations = 30;
    o.threads = 4;
    Stopwatch rb2;
    TwoQubitRbResult r = two_qubit_rb(dev, NoiseParams::from_calibration(dev.calibration), 1, 2, o);
    double t2q = rb2.seconds();
    pass = pass && std::abs(r.cz_fidelity - 0.9949) <= 0.005 && t2q < 300.0;
    detail += fmt("F_CZ %.3f +- %.3f%% (99.49 +- 0.5%%), 2Q RB %.1f s, total %.1f s", 100 * r.cz_fidelity,
                  100 * r.sigma_cz, t2q, clock.seconds());
    report(6, pass, detail);
}

QstOptions ideal_options() {
    QstOptions o;
    o.noise = false;
    o.markov_readout = false;
    o.bootstrap = 0;
    return o;
}

void criterion7(const DeviceConfig &cfg) {
    const Device &dev = cfg.device;
    PureState ghz;
    run_schedule(dev, ghz, ghz_circuit(dev), NoiseSample{});
    auto settings = TomographySettings::full({1, 2, 3});
    TomographyData exact = exact_tomography_data(dev, ghz, settings);
    double td = trace_distance(DensityOperator(linear_inversion(exact)), nuclear_density(ghz, {1, 2, 3}));

    QstResult noiseless = qst(dev, ghz_circuit(dev), settings, ghz_nuclear_state(), NoiseParams::off(),
                              MarkovReadoutModel::perfect(), cfg.policy, ideal_options());
    QstOptions o;
    o.bootstrap = 50;
    o.threads = 4;
    QstResult noisy = qst(dev, ghz_circuit(dev), settings, ghz_nuclear_state(), cfg.noise(), cfg.readout, cfg.policy, o);
    bool pass = td < 1e-9 && noiseless.fidelity >= 0.995 && noisy.fidelity >= 0.93 && noisy.fidelity <= 0.99;
    report(7, pass,
           fmt("exact trace distance %.2e; noiseless GHZ F %.5f at 1e4 shots; noisy GHZ F %.4f +- %.4f "
               "(bracket [0.93, 0.99])",
               td, noiseless.fidelity, noisy.fidelity, noisy.sigma));
}

void criterion8(const MarkovReadoutModel &model) {
    // Exact enumeration against sampling on random models.
    Rng rng(2026);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int agree = 0;
    const int runs = 100000;
    for (int m = 0; m < 20; ++m) {
        NucleusReadoutParams p;
        p.p_corr = 0.15 + 0.8 * u(rng);
        p.p_err = (p.p_corr - 0.05) * u(rng);
        p.p_flip = 0.01 * u(rng);
        int shots = 1 + static_cast<int>(rng() % 30);
        double f_th = 0.5 * u(rng);
        ReadoutFidelity exact = exact_readout_fidelity(p, shots, f_th);
        Rng mc = make_stream(8, m);
        std::uint64_t acc = 0, cor = 0;
        for (int k = 0; k < runs; ++k) {
            Spin s = (k & 1) ? Spin::Up : Spin::Down;
            SingleReadout r = simulate_readout(p, s, shots, mc);
            if (passes_threshold(r.delta_f, f_th)) {
                ++acc;
                cor += r.classified == s;
            }
        }
        double ret = static_cast<double>(acc) / runs;
        double fid = acc ? static_cast<double>(cor) / acc : 0.5;
        double sr = std::sqrt(exact.retention * (1 - exact.retention) / runs);
        double sf = acc ? std::sqrt(exact.fidelity * (1 - exact.fidelity) / acc) : 1.0;
        agree += std::abs(ret - exact.retention) <= 3 * sr && std::abs(fid - exact.fidelity) <= 3 * sf;
    }

    const NucleusReadoutParams &n3 = model.nucleus(3);
    double gain = exact_readout_fidelity(n3, 50, 0.0).fidelity - exact_readout_fidelity(n3, 19, 0.0).fidelity;
    int sat = saturation_shots(n3);

    bool monotone = true;
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
                        monotone = monotone && cur.fidelity >= prev.fidelity - 1e-12 &&
                                   cur.retention <= prev.retention + 1e-12;
                        prev = cur;
                    }
                }
            }
        }
    }
    bool pass = agree == 20 && gain < 5e-4 && monotone;
    report(8, pass,
           fmt("exact vs Monte-Carlo agree on %d/20 models; n3 (p_flip %.1e) F(50)-F(19) = %.2e, saturates at "
               "%d shots; threshold monotonicity %s",
               agree, n3.p_flip, gain, sat, monotone ? "holds" : "violated"));
}

void criterion9(const DeviceConfig &cfg) {
    Stopwatch clock;
    double sum = 0.0;
    std::uint64_t retained = 0;
    for (int c = 0; c < kNumConfigs; ++c) {
        GroverSpec spec;
        spec.marked = {NuclearConfig(c)};
        GroverRunOptions o;
        o.trajectories = 10000;
        o.seed = derive_seed(9, c);
        o.threads = 4;
        GroverResult r = run_grover(spec, cfg.device, cfg.noise(), cfg.readout, cfg.policy, o);
        sum += r.ratio;
        retained += r.retained;
    }
    double mean = sum / kNumConfigs;
    double t = clock.seconds();
    report(9, mean >= 0.92 && mean <= 0.98 && t < 600.0,
           fmt("noisy Grover mean success/ideal %.4f over 8 marked states (bracket [0.92, 0.98]), %.1f%% retained, "
               "%.1f s",
               mean, 100.0 * retained / (8.0 * 10000), t));
}

std::string grover_dump(const DeviceConfig &cfg, int threads) {
    GroverSpec spec;
    spec.marked = {NuclearConfig(5)};
    GroverRunOptions o;
    o.trajectories = 3000;
    o.seed = 77;
    o.threads = threads;
    GroverResult r = run_grover(spec, cfg.device, cfg.noise(), cfg.readout, cfg.policy, o);
    ExperimentRecord rec;
    rec.name = "grover";
    rec.seed = o.seed;
    rec.payload = {{"histogram", r.histogram}, {"retained", r.retained}, {"success", r.success},
                   {"sigma", r.sigma}, {"ratio", r.ratio}};
    return rec.deterministic_dump();
}

std::string qst_dump(const DeviceConfig &cfg, int threads) {
    QstOptions o;
    o.shots_per_setting = 500;
    o.bootstrap = 5;
    o.seed = 78;
    o.threads = threads;
    QstResult r = qst(cfg.device, bell_circuit(cfg.device, 1, 3, BellState::PsiPlus), TomographySettings::full({1, 3}),
                      bell_pair_state(BellState::PsiPlus), cfg.noise(), cfg.readout, cfg.policy, o);
    ExperimentRecord rec;
    rec.name = "qst";
    rec.seed = o.seed;
    rec.payload = {{"rho", to_json(r.rho)}, {"fidelity", r.fidelity}, {"sigma", r.sigma}, {"retained", r.retained}};
    return rec.deterministic_dump();
}

std::string rb_dump(const Device &dev, int threads) {
    RbOptions o;
    o.lengths = {1, 5, 20};
    o.variations = 4;
    o.seed = 79;
    o.threads = threads;
    SingleQubitRbResult r = single_qubit_rb(dev, NoiseParams::from_calibration(dev.calibration), 2, o);
    ExperimentRecord rec;
    rec.name = "rb";
    rec.seed = o.seed;
    rec.payload = {{"survival", r.curve.survival}, {"sem", r.curve.sem}, {"fidelity", r.gate_fidelity}};
    return rec.deterministic_dump();
}

std::string read_file(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Runs the CLI into `dir`; returns every output file with timing removed from JSON.
std::vector<std::pair<std::string, std::string>> cli_outputs(const std::string &cli, const fs::path &dir,
                                                             const std::string &args) {
    fs::remove_all(dir);
    std::string cmd = "\"" + cli + "\" --out \"" + dir.string() + "\" --seed 31 " + args + " > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) {
        return {};
    }
    std::vector<std::pair<std::string, std::string>> files;
    for (const auto &e : fs::directory_iterator(dir)) {
        std::string text = read_file(e.path());
        if (e.path().extension() == ".json") {
            auto j = nlohmann::json::parse(text);
            j.erase("timing");
            text = j.dump(2);
        }
        files.emplace_back(e.path().filename().string(), text);
    }
    std::sort(files.begin(), files.end());
    return files;
}

void criterion10(const DeviceConfig &cfg, const char *cli) {
    bool pass = grover_dump(cfg, 1) == grover_dump(cfg, 1) && grover_dump(cfg, 1) == grover_dump(cfg, 4);
    pass = pass && qst_dump(cfg, 1) == qst_dump(cfg, 1) && qst_dump(cfg, 1) == qst_dump(cfg, 3);
    pass = pass && rb_dump(cfg.device, 1) == rb_dump(cfg.device, 1) && rb_dump(cfg.device, 1) == rb_dump(cfg.device, 2);
    std::string detail = "library reruns of Grover, QST and RB identical across runs and thread counts";
    if (cli != nullptr) {
        fs::path base = fs::temp_directory_path() / "spinreg_acceptance";
        int compared = 0;
        for (const std::string args :
             {"--shots 2000 grover --marked 011", "--shots 300 qst --circuit bell-phi-minus-23 --bootstrap 3",
              "rb --qubit 3 --lengths 1,5,20 --variations 3", "--shots 2000 readout-optimize --max-shots 30"}) {
            auto a = cli_outputs(cli, base / "a", args);
            auto b = cli_outputs(cli, base / "b", args);
            pass = pass && !a.empty() && a == b;
            compared += static_cast<int>(a.size());
        }
        fs::remove_all(base);
        detail += fmt("; CLI outputs byte-identical over %d files", compared);
    } else {
        detail += "; CLI not checked (no binary given)";
    }
    report(10, pass, detail);
}

}  // namespace

int main(int argc, char **argv) {
    DeviceConfig cfg;
    criterion1(cfg.device);
    criterion2(cfg.device);
    criterion3(cfg.device);
    criterion4(cfg.device);
    criterion5();
    criterion6(cfg.device);
    criterion7(cfg);
    criterion8(cfg.readout);
    criterion9(cfg);
    criterion10(cfg, argc > 1 ? argv[1] : nullptr);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
