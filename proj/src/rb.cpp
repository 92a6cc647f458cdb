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

#include "spinreg/rb.hpp"

#include <cmath>
#include <stdexcept>

#include "spinreg/parallel.hpp"

namespace spinreg {

namespace {

void apply_pauli(Vector &a, int qubit, int pauli) {
    if (pauli == 0) {
        return;
    }
    const int mask = 1 << bit_position(qubit);
    const Complex i(0.0, 1.0);
    for (int k = 0; k < kRegisterDim; ++k) {
        if (k & mask) {
            continue;
        }
        Complex a0 = a[k];
        Complex a1 = a[k | mask];
        switch (pauli) {
            case 1:
                a[k] = a1;
                a[k | mask] = a0;
                break;
            case 2:
                a[k] = -i * a1;
                a[k | mask] = i * a0;
                break;
            default:
                a[k | mask] = -a1;
                break;
        }
    }
}

double prob_up(const PureState &psi, int qubit) {
    const int mask = 1 << bit_position(qubit);
    double p = 0.0;
    for (int k = 0; k < kRegisterDim; ++k) {
        if (k & mask) {
            p += psi.probability(k);
        }
    }
    return p;
}

struct GateOp {
    Segment segment;
    /// Qubits that may receive an injected Pauli after this gate.
    std::array<int, 2> qubits{-1, -1};
};

void run_ops(const Device &device, PureState &psi, const std::vector<const std::vector<GateOp> *> &ops,
             const NoiseSample &noise, double depolarizing, Rng &rng) {
    for (const auto *list : ops) {
        for (const auto &op : *list) {
            apply_segment(device, psi, op.segment, noise);
            if (depolarizing > 0.0) {
                for (int q : op.qubits) {
                    if (q >= 0 && bernoulli(rng, depolarizing)) {
                        apply_pauli(psi.mutable_amplitudes(), q,
                                    std::uniform_int_distribution<int>(0, 3)(rng));
                    }
                }
            }
        }
    }
}

void check_options(const RbOptions &o) {
    if (o.lengths.empty()) {
        throw std::invalid_argument("rb: lengths must be nonempty");
    }
    for (int n : o.lengths) {
        if (n < 0) {
            throw std::invalid_argument("rb: lengths must be non-negative");
        }
    }
    if (o.variations < 1 || o.noise_samples < 1) {
        throw std::invalid_argument("rb: need at least one variation and one noise sample");
    }
    if (!(o.depolarizing >= 0.0 && o.depolarizing <= 1.0)) {
        throw std::invalid_argument("rb: depolarizing probability outside [0, 1]");
    }
}

DecayCurve summarize(const std::vector<int> &lengths, int variations, const std::vector<double> &values) {
    DecayCurve c;
    c.lengths = lengths;
    for (std::size_t li = 0; li < lengths.size(); ++li) {
        double sum = 0.0;
        double sq = 0.0;
        for (int v = 0; v < variations; ++v) {
            double x = values[li * variations + v];
            sum += x;
            sq += x * x;
        }
        double mean = sum / variations;
        double var = variations > 1 ? std::max(sq / variations - mean * mean, 0.0) * variations / (variations - 1) : 0.0;
        c.survival.push_back(mean);
        c.sem.push_back(std::sqrt(var / variations));
        c.samples.push_back(variations);
    }
    return c;
}

std::vector<double> as_double(const std::vector<int> &v) { return {v.begin(), v.end()}; }

std::vector<std::vector<GateOp>> single_qubit_ops(const Device &device, int qubit, NuclearConfig config) {
    const auto &g = CliffordGroup1Q::instance();
    std::vector<std::vector<GateOp>> ops(g.size());
    for (int c = 0; c < g.size(); ++c) {
        for (NativeGate gate : g.element(c).gates) {
            ops[c].push_back({native_segment(device, qubit, gate, config), {qubit, -1}});
        }
    }
    return ops;
}

int effective_samples(const NoiseParams &active, const RbOptions &o) {
    return (active.enabled() || o.depolarizing > 0.0) ? o.noise_samples : 1;
}

}  // namespace

void DecayCurve::validate() const {
    if (lengths.size() != survival.size()) {
        throw std::invalid_argument("decay curve: lengths and survival differ in size");
    }
    for (double p : survival) {
        if (!(p >= -1e-9 && p <= 1.0 + 1e-9)) {
            throw std::invalid_argument("decay curve: survival outside [0, 1]");
        }
    }
}

void write_curve_csv(std::ostream &out, const DecayCurve &curve) {
    out << "length,survival,sem,samples\n";
    for (std::size_t k = 0; k < curve.lengths.size(); ++k) {
        out << curve.lengths[k] << "," << curve.survival[k] << "," << curve.sem[k] << "," << curve.samples[k] << "\n";
    }
}

void single_qubit_fidelities(SingleQubitRbResult &r) {
    r.clifford_fidelity = 1.0 - (1.0 - r.fit.f) / 2.0;
    r.sigma_clifford = r.fit.sigma_f / 2.0;
    r.gate_fidelity = 1.0 - (1.0 - r.clifford_fidelity) / r.gates_per_clifford;
    r.sigma_gate = r.sigma_clifford / r.gates_per_clifford;
}

SingleQubitRbResult single_qubit_rb(const Device &device, const NoiseParams &noise, int qubit,
                                    const RbOptions &options, std::optional<int> interleave) {
    check_options(options);
    if (qubit < 0 || qubit > kNumNuclei) {
        throw std::invalid_argument("single_qubit_rb: qubit must be 0..3");
    }
    const auto &g = CliffordGroup1Q::instance();
    if (interleave && (*interleave < 0 || *interleave >= g.size())) {
        throw std::invalid_argument("single_qubit_rb: interleaved Clifford index out of range");
    }
    const auto ops = single_qubit_ops(device, qubit, options.electron_config);
    const int x180 = g.find(native_matrix(NativeGate::X180));
    const NoiseParams active = options.noise ? noise : NoiseParams::off();
    const int samples = effective_samples(active, options);
    const int start = qubit == kElectron ? options.electron_config.bits() : 0;
    const std::uint64_t variations = options.variations;
    std::vector<double> values(options.lengths.size() * variations);
    parallel_for(values.size(), options.threads, [&](std::uint64_t idx) {
        const int n = options.lengths[idx / variations];
        Rng rng = make_stream(options.seed, idx);
        std::uniform_int_distribution<int> pick(0, g.size() - 1);
        std::vector<const std::vector<GateOp> *> seq;
        int total = g.identity_index();
        for (int k = 0; k < n; ++k) {
            int c = pick(rng);
            seq.push_back(&ops[c]);
            total = g.compose(total, c);
            if (interleave) {
                seq.push_back(&ops[*interleave]);
                total = g.compose(total, *interleave);
            }
        }
        const int rec_down = g.inverse(total);
        const int rec_up = g.compose(rec_down, x180);
        double sum = 0.0;
        for (int s = 0; s < samples; ++s) {
            NoiseSample sample = sample_noise(active, rng);
            for (int rec : {rec_up, rec_down}) {
                PureState psi = PureState::basis(start);
                seq.push_back(&ops[rec]);
                run_ops(device, psi, seq, sample, options.depolarizing, rng);
                seq.pop_back();
                double p = prob_up(psi, qubit);
                sum += rec == rec_up ? p : 1.0 - p;
            }
        }
        values[idx] = sum / (2.0 * samples);
    });
    SingleQubitRbResult r;
    r.curve = summarize(options.lengths, options.variations, values);
    const double half = 0.5;
    r.fit = fit_decay(as_double(r.curve.lengths), r.curve.survival, &half);
    r.gates_per_clifford = g.mean_physical_gates();
    single_qubit_fidelities(r);
    return r;
}

TwoQubitRbResult two_qubit_rb(const Device &device, const NoiseParams &noise, int i, int j, const RbOptions &options,
                              bool interleaved) {
    check_options(options);
    if (i == j || i < 1 || j < 1 || i > kNumNuclei || j > kNumNuclei) {
        throw std::invalid_argument("two_qubit_rb: need two distinct nuclei");
    }
    const auto &g2 = CliffordGroup2Q::instance();
    const NoiseParams active = options.noise ? noise : NoiseParams::off();
    const int samples = effective_samples(active, options);
    const Eigen::Matrix4cd cz = native_cz_matrix();
    std::vector<GateOp> cz_ops;
    for (const auto &s : geometric_cz(device, i, j).segments) {
        cz_ops.push_back({s, {-1, -1}});
    }
    if (!cz_ops.empty()) {
        cz_ops.back().qubits = {i, j};
    }
    auto clifford_ops = [&](int index) {
        std::vector<GateOp> out;
        for (const auto &pg : physical_gates(g2.element(index), i, j, options.schedule)) {
            if (pg.cz) {
                out.insert(out.end(), cz_ops.begin(), cz_ops.end());
            } else {
                out.push_back({native_segment(device, pg.qubit, pg.gate), {pg.qubit, -1}});
            }
        }
        return out;
    };
    const int mask = (1 << bit_position(i)) | (1 << bit_position(j));
    const std::uint64_t variations = options.variations;
    const std::size_t points = options.lengths.size() * variations;
    std::vector<double> ref(points), inter(points);
    parallel_for(points, options.threads, [&](std::uint64_t idx) {
        const int n = options.lengths[idx / variations];
        Rng rng = make_stream(options.seed, idx);
        std::uniform_int_distribution<int> pick(0, g2.size() - 1);
        std::vector<std::vector<GateOp>> cliffords;
        Eigen::Matrix4cd total_ref = Eigen::Matrix4cd::Identity();
        Eigen::Matrix4cd total_int = Eigen::Matrix4cd::Identity();
        std::vector<int> picks(n);
        for (int k = 0; k < n; ++k) {
            picks[k] = pick(rng);
            cliffords.push_back(clifford_ops(picks[k]));
            total_ref = g2.element(picks[k]).matrix * total_ref;
            total_int = cz * g2.element(picks[k]).matrix * total_int;
        }
        const int rec_ref = g2.find(total_ref.adjoint());
        const int rec_int = g2.find(total_int.adjoint());
        if (rec_ref < 0 || rec_int < 0) {
            throw std::logic_error("two-qubit Clifford group is not closed");
        }
        std::vector<GateOp> rec_ref_ops = clifford_ops(rec_ref);
        std::vector<GateOp> rec_int_ops = clifford_ops(rec_int);
        std::vector<const std::vector<GateOp> *> seq_ref, seq_int;
        for (const auto &c : cliffords) {
            seq_ref.push_back(&c);
            seq_int.push_back(&c);
            seq_int.push_back(&cz_ops);
        }
        seq_ref.push_back(&rec_ref_ops);
        seq_int.push_back(&rec_int_ops);
        double sum_ref = 0.0;
        double sum_int = 0.0;
        for (int s = 0; s < samples; ++s) {
            NoiseSample sample = sample_noise(active, rng);
            for (int pass = 0; pass < (interleaved ? 2 : 1); ++pass) {
                PureState psi;
                run_ops(device, psi, pass == 0 ? seq_ref : seq_int, sample, options.depolarizing, rng);
                double p = 0.0;
                for (int k = 0; k < kRegisterDim; ++k) {
                    if ((k & mask) == 0) {
                        p += psi.probability(k);
                    }
                }
                (pass == 0 ? sum_ref : sum_int) += p;
            }
        }
        ref[idx] = sum_ref / samples;
        inter[idx] = sum_int / samples;
    });
    TwoQubitRbResult r;
    r.reference = summarize(options.lengths, options.variations, ref);
    r.fit_reference = fit_decay(as_double(r.reference.lengths), r.reference.survival);
    r.reference_fidelity = 1.0 - 0.75 * (1.0 - r.fit_reference.f);
    if (interleaved) {
        r.interleaved = summarize(options.lengths, options.variations, inter);
        r.fit_interleaved = fit_decay(as_double(r.interleaved.lengths), r.interleaved.survival);
        r.interleaved_fidelity = 1.0 - 0.75 * (1.0 - r.fit_interleaved.f);
        double d = r.fit_interleaved.f / r.fit_reference.f;
        r.cz_fidelity = 1.0 - 0.75 * (1.0 - d);
        double rel = std::hypot(r.fit_interleaved.sigma_f / r.fit_interleaved.f,
                                r.fit_reference.sigma_f / r.fit_reference.f);
        r.sigma_cz = 0.75 * d * rel;
    }
    return r;
}

SequentialRbResult sequential_rb(const Device &device, const NoiseParams &noise, const RbOptions &options) {
    check_options(options);
    const auto &g = CliffordGroup1Q::instance();
    std::array<std::vector<std::vector<GateOp>>, kNumNuclei> ops;
    for (int n = 1; n <= kNumNuclei; ++n) {
        ops[n - 1] = single_qubit_ops(device, n, {});
    }
    const int x180 = g.find(native_matrix(NativeGate::X180));
    const NoiseParams active = options.noise ? noise : NoiseParams::off();
    const int samples = effective_samples(active, options);
    const std::uint64_t variations = options.variations;
    const std::size_t points = options.lengths.size() * variations;
    std::array<std::vector<double>, kNumNuclei> values;
    for (auto &v : values) {
        v.assign(points, 0.0);
    }
    parallel_for(points, options.threads, [&](std::uint64_t idx) {
        const int len = options.lengths[idx / variations];
        Rng rng = make_stream(options.seed, idx);
        std::uniform_int_distribution<int> pick(0, g.size() - 1);
        std::array<std::vector<const GateOp *>, kNumNuclei> body;
        std::array<int, kNumNuclei> total{};
        for (int n = 0; n < kNumNuclei; ++n) {
            for (int k = 0; k < len; ++k) {
                int c = pick(rng);
                for (const auto &op : ops[n][c]) {
                    body[n].push_back(&op);
                }
                total[n] = g.compose(total[n], c);
            }
        }
        std::array<double, kNumNuclei> sums{};
        for (int s = 0; s < samples; ++s) {
            NoiseSample sample = sample_noise(active, rng);
            for (bool up : {true, false}) {
                std::array<std::vector<const GateOp *>, kNumNuclei> lists = body;
                for (int n = 0; n < kNumNuclei; ++n) {
                    int rec = g.inverse(total[n]);
                    if (up) {
                        rec = g.compose(rec, x180);
                    }
                    for (const auto &op : ops[n][rec]) {
                        lists[n].push_back(&op);
                    }
                }
                PureState psi;
                std::size_t longest = 0;
                for (const auto &l : lists) {
                    longest = std::max(longest, l.size());
                }
                for (std::size_t k = 0; k < longest; ++k) {
                    for (int n = 0; n < kNumNuclei; ++n) {
                        if (k >= lists[n].size()) {
                            continue;
                        }
                        apply_segment(device, psi, lists[n][k]->segment, sample);
                        if (options.depolarizing > 0.0 && bernoulli(rng, options.depolarizing)) {
                            apply_pauli(psi.mutable_amplitudes(), n + 1,
                                        std::uniform_int_distribution<int>(0, 3)(rng));
                        }
                    }
                }
                for (int n = 0; n < kNumNuclei; ++n) {
                    double p = prob_up(psi, n + 1);
                    sums[n] += up ? p : 1.0 - p;
                }
            }
        }
        for (int n = 0; n < kNumNuclei; ++n) {
            values[n][idx] = sums[n] / (2.0 * samples);
        }
    });
    SequentialRbResult out;
    const double half = 0.5;
    for (int n = 0; n < kNumNuclei; ++n) {
        auto &r = out.nuclei[n];
        r.curve = summarize(options.lengths, options.variations, values[n]);
        r.fit = fit_decay(as_double(r.curve.lengths), r.curve.survival, &half);
        r.gates_per_clifford = g.mean_physical_gates();
        single_qubit_fidelities(r);
    }
    return out;
}

}  // namespace spinreg
