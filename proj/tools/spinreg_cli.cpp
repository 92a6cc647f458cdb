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

// Command-line front end. Every subcommand writes <out>/<name>.json holding
// the config snapshot, the seed, the results and a separate timing block,
// plus CSV files for curves and histograms.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spinreg/circuits.hpp"
#include "spinreg/clifford.hpp"
#include "spinreg/device_config.hpp"
#include "spinreg/experiment.hpp"
#include "spinreg/fit.hpp"
#include "spinreg/grover.hpp"
#include "spinreg/noise.hpp"
#include "spinreg/ramsey.hpp"
#include "spinreg/rb.hpp"
#include "spinreg/readout.hpp"
#include "spinreg/register.hpp"
#include "spinreg/tomography.hpp"

namespace {

using nlohmann::json;
using namespace spinreg;

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

struct Common {
    std::string device;
    std::string out = "spinreg_out";
    std::uint64_t seed = 1;
    std::uint64_t shots = 10000;
    std::string noise = "on";
    int threads = 1;
};

struct Context {
    DeviceConfig config;
    json config_json;
    NoiseParams noise = NoiseParams::off();
    bool noise_on = true;
    /// Readout errors through the Markov chain; only with --noise on.
    bool readout_on = true;
};

Context load(const Common &c) {
    Context ctx;
    if (!c.device.empty()) {
        ctx.config = load_device_config(c.device);
    }
    if (c.noise == "on" || c.noise == "quasistatic") {
        ctx.noise_on = true;
        ctx.readout_on = c.noise == "on";
    } else if (c.noise == "off") {
        ctx.noise_on = false;
        ctx.readout_on = false;
    } else {
        throw ConfigError("--noise must be on, off or quasistatic");
    }
    if (c.threads < 1) {
        throw ConfigError("--threads must be at least 1");
    }
    ctx.noise = ctx.noise_on ? ctx.config.noise() : NoiseParams::off();
    ctx.config_json = to_json(ctx.config);
    return ctx;
}

std::filesystem::path out_dir(const Common &c) {
    std::filesystem::path p(c.out);
    std::filesystem::create_directories(p);
    return p;
}

void write_text(const std::filesystem::path &path, const std::string &text) {
    std::ofstream f(path);
    if (!f) {
        throw ConfigError("cannot write " + path.string());
    }
    f << text;
}

void emit(const Common &c, const Context &ctx, const std::string &name, json payload, json options,
          const Stopwatch &clock) {
    ExperimentRecord rec;
    rec.name = name;
    rec.seed = c.seed;
    rec.config = {{"device", ctx.config_json}, {"noise", c.noise}, {"options", std::move(options)}};
    rec.payload = std::move(payload);
    rec.wall_seconds = clock.seconds();
    write_text(out_dir(c) / (name + ".json"), rec.to_json().dump(2) + "\n");
}

json curve_json(const DecayCurve &c) {
    return {{"lengths", c.lengths}, {"survival", c.survival}, {"sem", c.sem}};
}

json decay_json(const DecayFit &f) {
    return {{"a", f.a}, {"f", f.f}, {"b", f.b}, {"sigma_a", f.sigma_a}, {"sigma_f", f.sigma_f},
            {"sigma_b", f.sigma_b}, {"residual_norm", f.residual_norm}};
}

std::string to_csv(const DecayCurve &c) {
    std::ostringstream s;
    write_curve_csv(s, c);
    return s.str();
}

int parse_qubit(const std::string &q) {
    if (q == "e" || q == "0") {
        return 0;
    }
    if (q == "1" || q == "2" || q == "3") {
        return q[0] - '0';
    }
    throw ConfigError("--qubit must be e, 1, 2 or 3");
}

std::pair<int, int> parse_pair(const std::string &p) {
    if (p.size() != 2 || p[0] == p[1] || p[0] < '1' || p[0] > '3' || p[1] < '1' || p[1] > '3') {
        throw ConfigError("--pair must name two distinct nuclei, e.g. 12");
    }
    return {p[0] - '0', p[1] - '0'};
}

double pct(double x) { return 100.0 * x; }

json config_label_map(const std::array<double, kNumConfigs> &v) {
    json j = json::object();
    for (int k = 0; k < kNumConfigs; ++k) {
        j[NuclearConfig(k).to_string()] = v[k];
    }
    return j;
}

// --- subcommands ---------------------------------------------------------

void run_spectrum(const Common &c) {
    Stopwatch clock;
    Context ctx = load(c);
    const auto &params = ctx.config.device.params;
    TransitionTable t = transition_table(params);
    json nmr = json::array();
    std::ostringstream csv;
    csv << "kind,label,frequency_hz\n";
    for (int k = 0; k < kNumConfigs; ++k) {
        csv << "esr," << NuclearConfig(k).to_string() << "," << t.esr[k] << "\n";
    }
    for (const auto &[key, f] : t.nmr) {
        std::string label = "n" + std::to_string(key.first) + (key.second == Spin::Down ? "|e_down" : "|e_up");
        nmr.push_back({{"nucleus", key.first}, {"electron", key.second == Spin::Down ? "down" : "up"}, {"hz", f}});
        csv << "nmr," << label << "," << f << "\n";
    }
    json q = json::array();
    auto qf = quality_factors(ctx.config.device.calibration);
    const char *names[] = {"e", "n1", "n2", "n3"};
    for (int k = 0; k < 4; ++k) {
        json e = {{"qubit", names[k]}, {"qubit_q", qf[k].qubit}};
        e["gate_q"] = qf[k].gate ? json(*qf[k].gate) : json(nullptr);
        q.push_back(e);
    }
    write_text(out_dir(c) / "spectrum.csv", csv.str());
    json payload = {{"esr_offset_hz", config_label_map(t.esr)}, {"nmr", nmr}, {"quality_factors", q}};
    std::cout << "ESR offsets (MHz from gamma_e B0):\n";
    for (int k = 0; k < kNumConfigs; ++k) {
        std::cout << "  " << NuclearConfig(k).to_string() << "  " << t.esr[k] / 1e6 << "\n";
    }
    emit(c, ctx, "spectrum", payload, json::object(), clock);
}

struct RamseyArgs {
    std::string qubit = "e";
    std::string config = "000";
    int points = 61;
    double t_max = 60e-6;
    double detuning = 100e3;
    int samples = 400;
    bool rabi = false;
};

void run_ramsey(const Common &c, const RamseyArgs &a) {
    Stopwatch clock;
    Context ctx = load(c);
    const int q = parse_qubit(a.qubit);
    RamseyOptions o;
    o.detuning_hz = a.detuning;
    o.noise_samples = a.samples;
    o.seed = c.seed;
    o.electron_config = NuclearConfig::parse(a.config);
    auto times = linspace(0.0, a.t_max, a.points);
    Curve curve = a.rabi ? simulate_rabi(ctx.config.device, ctx.noise, q, times, o)
                         : simulate_ramsey(ctx.config.device, ctx.noise, q, times, o);
    std::ostringstream csv;
    csv << "t_s,p_up\n";
    for (std::size_t k = 0; k < curve.t.size(); ++k) {
        csv << curve.t[k] << "," << curve.p_up[k] << "\n";
    }
    const std::string name = a.rabi ? "rabi" : "ramsey";
    write_text(out_dir(c) / (name + ".csv"), csv.str());
    json fit;
    if (a.rabi) {
        RabiFit f = fit_rabi(curve.t, curve.p_up);
        fit = {{"amplitude", f.amplitude}, {"omega", f.omega}, {"phase", f.phase}, {"offset", f.offset},
               {"f_rabi_hz", f.omega / (2 * std::numbers::pi)}, {"sigma_omega", f.sigma_omega}};
        std::cout << "f_Rabi = " << f.omega / (2 * std::numbers::pi) / 1e3 << " kHz\n";
    } else {
        RamseyFit f = fit_ramsey(curve.t, curve.p_up);
        fit = {{"amplitude", f.amplitude}, {"omega", f.omega}, {"phase", f.phase}, {"offset", f.offset},
               {"t2_star_s", f.t2_star}, {"sigma_t2_star_s", f.sigma_t2_star}};
        std::cout << "T2* = " << f.t2_star * 1e6 << " +- " << f.sigma_t2_star * 1e6 << " us\n";
    }
    json opts = {{"qubit", a.qubit}, {"config", a.config}, {"points", a.points}, {"t_max_s", a.t_max},
                 {"detuning_hz", a.detuning}, {"noise_samples", a.samples}};
    emit(c, ctx, name, {{"t", curve.t}, {"p_up", curve.p_up}, {"fit", fit}}, opts, clock);
}

struct RbArgs {
    std::string qubit = "1";
    std::string pair = "12";
    std::string config = "000";
    std::vector<int> lengths;
    int variations = 30;
    int samples = 10;
    double depolarizing = 0.0;
    std::string schedule = "alternate";
};

RbOptions rb_options(const Common &c, const Context &ctx, const RbArgs &a) {
    RbOptions o;
    if (!a.lengths.empty()) {
        o.lengths = a.lengths;
    }
    o.variations = a.variations;
    o.noise_samples = a.samples;
    o.seed = c.seed;
    o.noise = ctx.noise_on;
    o.depolarizing = a.depolarizing;
    o.threads = c.threads;
    o.electron_config = NuclearConfig::parse(a.config);
    o.schedule = parse_layer_schedule(a.schedule);
    return o;
}

json rb_opts_json(const RbOptions &o) {
    return {{"lengths", o.lengths}, {"variations", o.variations}, {"noise_samples", o.noise_samples},
            {"depolarizing", o.depolarizing}, {"electron_config", o.electron_config.to_string()}};
}

json single_json(const SingleQubitRbResult &r) {
    return {{"curve", curve_json(r.curve)},
            {"fit", decay_json(r.fit)},
            {"clifford_fidelity", r.clifford_fidelity},
            {"sigma_clifford", r.sigma_clifford},
            {"gate_fidelity", r.gate_fidelity},
            {"sigma_gate", r.sigma_gate},
            {"gates_per_clifford", r.gates_per_clifford}};
}

void run_rb(const Common &c, const RbArgs &a) {
    Stopwatch clock;
    Context ctx = load(c);
    const int q = parse_qubit(a.qubit);
    RbOptions o = rb_options(c, ctx, a);
    auto r = single_qubit_rb(ctx.config.device, ctx.config.noise(), q, o);
    write_text(out_dir(c) / "rb.csv", to_csv(r.curve));
    std::cout << "qubit " << a.qubit << ": Clifford fidelity " << pct(r.clifford_fidelity) << "%, physical gate "
              << pct(r.gate_fidelity) << " +- " << pct(r.sigma_gate) << "%\n";
    json opts = rb_opts_json(o);
    opts["qubit"] = a.qubit;
    emit(c, ctx, "rb", single_json(r), opts, clock);
}

void run_rb2q(const Common &c, const RbArgs &a) {
    Stopwatch clock;
    Context ctx = load(c);
    auto [i, j] = parse_pair(a.pair);
    RbOptions o = rb_options(c, ctx, a);
    auto r = two_qubit_rb(ctx.config.device, ctx.config.noise(), i, j, o);
    write_text(out_dir(c) / "rb2q_reference.csv", to_csv(r.reference));
    write_text(out_dir(c) / "rb2q_interleaved.csv", to_csv(r.interleaved));
    std::cout << "pair " << a.pair << ": reference " << pct(r.reference_fidelity) << "%, interleaved "
              << pct(r.interleaved_fidelity) << "%, CZ " << pct(r.cz_fidelity) << " +- " << pct(r.sigma_cz) << "%\n";
    json opts = rb_opts_json(o);
    opts["pair"] = a.pair;
    opts["schedule"] = a.schedule;
    json payload = {{"reference", curve_json(r.reference)},         {"interleaved", curve_json(r.interleaved)},
                    {"fit_reference", decay_json(r.fit_reference)}, {"fit_interleaved", decay_json(r.fit_interleaved)},
                    {"reference_fidelity", r.reference_fidelity},   {"interleaved_fidelity", r.interleaved_fidelity},
                    {"cz_fidelity", r.cz_fidelity},                 {"sigma_cz", r.sigma_cz}};
    emit(c, ctx, "rb2q", payload, opts, clock);
}

void run_rb_seq(const Common &c, const RbArgs &a) {
    Stopwatch clock;
    Context ctx = load(c);
    RbOptions o = rb_options(c, ctx, a);
    if (a.lengths.empty()) {
        o.lengths = {1, 2, 4, 8, 16, 24, 32, 48};
    }
    auto r = sequential_rb(ctx.config.device, ctx.config.noise(), o);
    json payload = json::array();
    for (int n = 0; n < kNumNuclei; ++n) {
        write_text(out_dir(c) / ("rb_seq_n" + std::to_string(n + 1) + ".csv"), to_csv(r.nuclei[n].curve));
        std::cout << "n" << n + 1 << ": physical gate " << pct(r.nuclei[n].gate_fidelity) << " +- "
                  << pct(r.nuclei[n].sigma_gate) << "%\n";
        payload.push_back(single_json(r.nuclei[n]));
    }
    emit(c, ctx, "rb-seq", {{"nuclei", payload}}, rb_opts_json(o), clock);
}

struct QstArgs {
    std::string circuit = "ghz";
    int bootstrap = 200;
    bool markov = true;
};

void run_qst(const Common &c, const QstArgs &a) {
    Stopwatch clock;
    Context ctx = load(c);
    const Device &device = ctx.config.device;
    GateSchedule circuit = circuit_by_name(device, a.circuit);
    TomographyTarget target = tomography_target(a.circuit);
    QstOptions o;
    o.shots_per_setting = c.shots;
    o.seed = c.seed;
    o.noise = ctx.noise_on;
    o.markov_readout = a.markov && ctx.readout_on;
    o.bootstrap = a.bootstrap;
    o.threads = c.threads;
    auto settings = TomographySettings::full(target.qubits);
    QstResult r = qst(device, circuit, settings, target.state, ctx.config.noise(), ctx.config.readout,
                      ctx.config.policy, o);
    std::ostringstream csv;
    write_counts_csv(csv, r.data);
    write_text(out_dir(c) / "qst_counts.csv", csv.str());
    std::vector<std::string> labels;
    for (int q : target.qubits) {
        labels.push_back("n" + std::to_string(q));
    }
    write_text(out_dir(c) / "qst_rho.json", to_json(r.rho, labels).dump(2) + "\n");
    std::cout << a.circuit << ": fidelity " << pct(r.fidelity) << " +- " << pct(r.sigma) << "% ("
              << (r.projected ? "projected" : "unprojected") << ", retained " << r.retained << "/" << r.attempted
              << ")\n";
    json payload = {{"fidelity", r.fidelity},   {"sigma", r.sigma},
                    {"projected", r.projected}, {"retained", r.retained},
                    {"attempted", r.attempted}, {"rho", to_json(r.rho, labels)}};
    json opts = {{"circuit", a.circuit}, {"shots_per_setting", c.shots}, {"bootstrap", a.bootstrap},
                 {"markov_readout", o.markov_readout}};
    emit(c, ctx, "qst", payload, opts, clock);
}

struct ReadoutArgs {
    int max_shots = 50;
    int histogram_shots = 200;
};

void run_readout_optimize(const Common &c, const ReadoutArgs &a) {
    Stopwatch clock;
    Context ctx = load(c);
    const auto &model = ctx.config.readout;
    ShotOptimum best = optimize_shot_counts(model, a.max_shots);
    json curves = json::array();
    std::ostringstream csv;
    csv << "shots,f1,f2,f3\n";
    for (int n = 1; n <= a.max_shots; ++n) {
        csv << n;
        for (int k = 1; k <= kNumNuclei; ++k) {
            csv << "," << exact_readout_fidelity(model.nucleus(k), n, 0.0).fidelity;
        }
        csv << "\n";
    }
    write_text(out_dir(c) / "readout_fidelity_vs_shots.csv", csv.str());
    for (int k = 1; k <= kNumNuclei; ++k) {
        auto bins = delta_f_histogram(model.nucleus(k), a.histogram_shots, c.shots, derive_seed(c.seed, k));
        std::ostringstream h;
        write_histogram_csv(h, bins);
        write_text(out_dir(c) / ("readout_histogram_n" + std::to_string(k) + ".csv"), h.str());
    }
    ReadoutExperimentResult exact = exact_readout_experiment(model, ctx.config.policy);
    ReadoutExperimentResult mc =
        readout_fidelity_experiment(model, ctx.config.policy, c.shots, c.seed, c.threads);
    std::cout << "optimum shots (" << best.shots[0] << ", " << best.shots[1] << ", " << best.shots[2]
              << "), F_N = " << pct(best.combined) << "%\n";
    std::cout << "policy double readout: " << pct(exact.fidelity[0]) << "%, " << pct(exact.fidelity[1]) << "%, "
              << pct(exact.fidelity[2]) << "% at retention " << pct(exact.combined_retention) << "%\n";
    auto exp_json = [](const ReadoutExperimentResult &r) {
        return json{{"fidelity", r.fidelity},
                    {"sigma", r.sigma},
                    {"retention", r.retention},
                    {"combined_fidelity", r.combined_fidelity},
                    {"combined_sigma", r.combined_sigma},
                    {"combined_retention", r.combined_retention},
                    {"repetitions", r.repetitions},
                    {"retained", r.retained}};
    };
    json payload = {{"optimum", {{"shots", best.shots}, {"fidelities", best.fidelities}, {"combined", best.combined}}},
                    {"saturation_shots_n3", saturation_shots(model.nucleus(3), a.max_shots)},
                    {"policy_exact", exp_json(exact)},
                    {"policy_monte_carlo", exp_json(mc)}};
    emit(c, ctx, "readout-optimize", payload,
         {{"max_shots", a.max_shots}, {"histogram_shots", a.histogram_shots}, {"repetitions", c.shots}}, clock);
}

struct GroverArgs {
    std::vector<std::string> marked;
    std::string iterations = "auto";
    std::string policy = "paper";
};

void run_grover_cmd(const Common &c, const GroverArgs &a) {
    Stopwatch clock;
    Context ctx = load(c);
    GroverSpec spec;
    spec.marked.clear();
    for (const auto &m : a.marked) {
        spec.marked.push_back(NuclearConfig::parse(m));
    }
    if (spec.marked.empty()) {
        spec.marked = {NuclearConfig(0)};
    }
    if (a.iterations != "auto") {
        try {
            spec.iterations = std::stoi(a.iterations);
        } catch (const std::exception &) {
            throw ConfigError("--iterations must be auto or an integer");
        }
    }
    spec.validate();
    GroverRunOptions o;
    o.trajectories = c.shots;
    o.seed = c.seed;
    o.noise = ctx.noise_on;
    o.threads = c.threads;
    if (a.policy != "paper" && a.policy != "none") {
        throw ConfigError("--policy must be paper or none");
    }
    o.markov_readout = ctx.readout_on && a.policy == "paper";
    GroverResult r = run_grover(spec, ctx.config.device, ctx.config.noise(), ctx.config.readout, ctx.config.policy, o);
    std::ostringstream csv;
    csv << "config,count\n";
    for (int k = 0; k < kNumConfigs; ++k) {
        csv << NuclearConfig(k).to_string() << "," << r.histogram[k] << "\n";
    }
    write_text(out_dir(c) / "grover_histogram.csv", csv.str());
    std::cout << "iterations " << r.iterations << ": success " << pct(r.success) << " +- " << pct(r.sigma)
              << "%, ideal " << pct(r.ideal) << "%, ratio " << pct(r.ratio) << "%\n";
    std::vector<std::string> marked;
    for (auto m : spec.marked) {
        marked.push_back(m.to_string());
    }
    json payload = {{"iterations", r.iterations}, {"histogram", r.histogram}, {"trajectories", r.trajectories},
                    {"retained", r.retained},     {"success", r.success},     {"sigma", r.sigma},
                    {"ideal", r.ideal},           {"ratio", r.ratio},         {"ratio_sigma", r.ratio_sigma}};
    emit(c, ctx, "grover", payload,
         {{"marked", marked},
          {"iterations", a.iterations},
          {"policy", a.policy},
          {"markov_readout", o.markov_readout}},
         clock);
}

json budget_json(const ErrorBudget &b) {
    json rows = json::array();
    for (const auto &e : b.entries) {
        rows.push_back({{"label", e.label}, {"count", e.count}, {"fidelity", e.fidelity}, {"idle", e.idle}});
    }
    return {{"rows", rows}, {"total_without_idle", b.total_without_idle}, {"total_with_idle", b.total_with_idle}};
}

void run_budget(const Common &c) {
    Stopwatch clock;
    Context ctx = load(c);
    ErrorBudget b = error_budget(grover_budget_entries(ctx.config.device, ctx.config.benchmarks));
    for (const auto &e : b.entries) {
        std::cout << "  " << e.label << "  x" << e.count << "  " << pct(e.fidelity) << "%\n";
    }
    std::cout << "total without idle " << pct(b.total_without_idle) << "%\n";
    std::cout << "total with idle    " << pct(b.total_with_idle) << "%\n";
    emit(c, ctx, "budget", budget_json(b), json::object(), clock);
}

struct Anchor {
    std::string name;
    double computed;
    double reference;
    double tolerance;
};

void run_reproduce_all(const Common &c) {
    Stopwatch clock;
    Context ctx = load(c);
    const Device &device = ctx.config.device;
    const auto &cal = device.calibration;
    std::vector<Anchor> rows;
    GroverSpec g;
    rows.push_back({"grover ideal success, one marked, r=2 (%)", pct(grover_distribution(g, device)[0]), 94.53, 0.01});
    GroverSpec g2;
    g2.marked = {NuclearConfig(1), NuclearConfig(6)};
    g2.iterations = 1;
    auto d2 = grover_distribution(g2, device);
    rows.push_back({"grover ideal success, two marked, r=1 (%)", pct(d2[1] + d2[6]), 100.0, 1e-7});
    rows.push_back({"expected CZ error (%)", pct(expected_cz_error(1.0 / 171.0e3, 31.7e-6)), 0.32, 0.02});
    ErrorBudget b = error_budget(grover_budget_entries(device, ctx.config.benchmarks));
    rows.push_back({"budget without idle (%)", pct(b.total_without_idle), 95.89, 0.02});
    rows.push_back({"budget with idle (%)", pct(b.total_with_idle), 93.23, 0.05});
    const double table_idle[] = {99.98, 99.62, 99.70};
    for (int n = 1; n <= kNumNuclei; ++n) {
        rows.push_back({"idle fidelity n" + std::to_string(n) + " (%)",
                        pct(idle_fidelity(grover_idle_time(cal, n), cal.nucleus(n).t2_star_s)), table_idle[n - 1],
                        0.01});
    }
    const auto &c1 = CliffordGroup1Q::instance();
    const auto &c2 = CliffordGroup2Q::instance();
    rows.push_back({"1Q Clifford group size", double(c1.size()), 24, 0});
    rows.push_back({"1Q mean physical gates", c1.mean_physical_gates(), 1.875, 1e-12});
    rows.push_back({"2Q Clifford group size", double(c2.size()), 11520, 0});
    rows.push_back({"2Q mean CZ", c2.mean_cz(), 1.5, 1e-12});
    json report = json::array();
    std::ostringstream md;
    md << "| quantity | computed | reference | tolerance | status |\n|---|---|---|---|---|\n";
    bool all = true;
    for (const auto &r : rows) {
        bool ok = std::abs(r.computed - r.reference) <= r.tolerance + 1e-12;
        all = all && ok;
        report.push_back({{"quantity", r.name},
                          {"computed", r.computed},
                          {"reference", r.reference},
                          {"tolerance", r.tolerance},
                          {"ok", ok}});
        md << "| " << r.name << " | " << r.computed << " | " << r.reference << " | " << r.tolerance << " | "
           << (ok ? "ok" : "MISMATCH") << " |\n";
    }
    std::cout << md.str();
    write_text(out_dir(c) / "reproduce_all.md", md.str());
    emit(c, ctx, "reproduce-all", {{"anchors", report}, {"all_ok", all}}, json::object(), clock);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"spinreg: pulse-level simulator of a four-qubit electron-nuclear spin register"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--device", common.device, "device config JSON (default: built-in calibration)")
        ->envname("SPINREG_DEVICE");
    app.add_option("--out", common.out, "output directory")->envname("SPINREG_OUT");
    app.add_option("--seed", common.seed, "master seed")->envname("SPINREG_SEED");
    app.add_option("--shots", common.shots, "trajectories, shots per setting or repetitions")
        ->envname("SPINREG_SHOTS")
        ->check(CLI::PositiveNumber);
    app.add_option("--noise", common.noise, "on (dephasing and readout errors), quasistatic (dephasing only) or off")
        ->envname("SPINREG_NOISE");
    app.add_option("--threads", common.threads, "worker threads")->envname("SPINREG_THREADS");
    app.fallthrough();

    auto *spectrum = app.add_subcommand("spectrum", "ESR/NMR transition frequencies and quality factors");

    RamseyArgs ramsey_args;
    auto *ramsey = app.add_subcommand("ramsey", "simulated Ramsey (or Rabi) curve and fit");
    ramsey->add_option("--qubit", ramsey_args.qubit, "e, 1, 2 or 3");
    ramsey->add_option("--config", ramsey_args.config, "nuclear configuration for electron experiments");
    ramsey->add_option("--points", ramsey_args.points);
    ramsey->add_option("--t-max", ramsey_args.t_max, "longest delay, s");
    ramsey->add_option("--detuning", ramsey_args.detuning, "virtual detuning, Hz");
    ramsey->add_option("--samples", ramsey_args.samples, "quasistatic noise samples");
    ramsey->add_flag("--rabi", ramsey_args.rabi, "simulate a Rabi oscillation instead");

    RbArgs rb_args;
    auto add_rb = [&](CLI::App *sub) {
        sub->add_option("--lengths", rb_args.lengths, "Clifford sequence lengths")->delimiter(',');
        sub->add_option("--variations", rb_args.variations);
        sub->add_option("--noise-samples", rb_args.samples);
        sub->add_option("--depolarizing", rb_args.depolarizing, "Pauli error probability per physical gate");
    };
    auto *rb = app.add_subcommand("rb", "single-qubit randomized benchmarking");
    add_rb(rb);
    rb->add_option("--qubit", rb_args.qubit, "e, 1, 2 or 3");
    rb->add_option("--config", rb_args.config, "nuclear configuration conditioning electron gates");
    auto *rb2q = app.add_subcommand("rb2q", "two-qubit reference and CZ-interleaved RB");
    add_rb(rb2q);
    rb2q->add_option("--pair", rb_args.pair, "nuclear pair, e.g. 12");
    rb2q->add_option("--schedule", rb_args.schedule, "alternate|serial");
    auto *rb_seq = app.add_subcommand("rb-seq", "sequential RB on all three nuclei");
    add_rb(rb_seq);

    QstArgs qst_args;
    auto *qst_cmd = app.add_subcommand("qst", "state tomography of a named circuit");
    qst_cmd->add_option("--circuit", qst_args.circuit, "ghz or bell-<phi|psi>-<plus|minus>[-ij]");
    qst_cmd->add_option("--bootstrap", qst_args.bootstrap);
    qst_cmd->add_flag("!--ideal-readout", qst_args.markov, "skip the Markov readout chain");

    ReadoutArgs readout_args;
    auto *readout = app.add_subcommand("readout-optimize", "shot-count optimization and readout fidelities");
    readout->add_option("--max-shots", readout_args.max_shots);
    readout->add_option("--histogram-shots", readout_args.histogram_shots);

    GroverArgs grover_args;
    auto *grover = app.add_subcommand("grover", "Grover search on the nuclei");
    grover->add_option("--marked", grover_args.marked, "marked configuration, repeatable");
    grover->add_option("--iterations", grover_args.iterations, "auto or N");
    grover->add_option("--policy", grover_args.policy, "paper|none");

    auto *budget = app.add_subcommand("budget", "Grover error budget");
    auto *reproduce = app.add_subcommand("reproduce-all", "compare computed anchors with the reference values");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*spectrum) {
            run_spectrum(common);
        } else if (*ramsey) {
            run_ramsey(common, ramsey_args);
        } else if (*rb) {
            run_rb(common, rb_args);
        } else if (*rb2q) {
            run_rb2q(common, rb_args);
        } else if (*rb_seq) {
            run_rb_seq(common, rb_args);
        } else if (*qst_cmd) {
            run_qst(common, qst_args);
        } else if (*readout) {
            run_readout_optimize(common, readout_args);
        } else if (*grover) {
            run_grover_cmd(common, grover_args);
        } else if (*budget) {
            run_budget(common);
        } else if (*reproduce) {
            run_reproduce_all(common);
        }
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::filesystem::filesystem_error &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
