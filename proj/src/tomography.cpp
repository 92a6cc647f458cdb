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

#include "spinreg/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spinreg/parallel.hpp"

namespace spinreg {

namespace {

constexpr double kPi = std::numbers::pi;

int config_outcome(int config, const std::vector<int> &qubits) {
    int out = 0;
    for (int q : qubits) {
        out = (out << 1) | ((config >> bit_position(q)) & 1);
    }
    return out;
}

std::vector<double> outcome_probabilities(const PureState &psi, const std::vector<int> &qubits) {
    std::vector<double> p(1u << qubits.size(), 0.0);
    for (int k = 0; k < kRegisterDim; ++k) {
        p[config_outcome(k & 7, qubits)] += psi.probability(k);
    }
    return p;
}

std::vector<double> multinomial(const std::vector<double> &p, std::uint64_t n, Rng &rng) {
    std::vector<double> out(p.size(), 0.0);
    double rest = 1.0;
    std::uint64_t left = n;
    for (std::size_t k = 0; k + 1 < p.size() && left > 0; ++k) {
        double q = rest > 0.0 ? std::clamp(p[k] / rest, 0.0, 1.0) : 0.0;
        std::uint64_t draw = std::binomial_distribution<std::uint64_t>(left, q)(rng);
        out[k] = static_cast<double>(draw);
        left -= draw;
        rest -= p[k];
    }
    out.back() += static_cast<double>(left);
    return out;
}

}  // namespace

char basis_label(PauliBasis b) {
    switch (b) {
        case PauliBasis::X:
            return 'X';
        case PauliBasis::Y:
            return 'Y';
        case PauliBasis::Z:
            return 'Z';
    }
    return '?';
}

void TomographySettings::validate() const {
    if (qubits.empty() || qubits.size() > static_cast<std::size_t>(kNumNuclei)) {
        throw std::invalid_argument("tomography: measure between one and three nuclei");
    }
    for (int q : qubits) {
        if (q < 1 || q > kNumNuclei || std::count(qubits.begin(), qubits.end(), q) != 1) {
            throw std::invalid_argument("tomography: qubits must be distinct nuclei");
        }
    }
    for (const auto *order : {&rotation_order, &readout_order}) {
        for (int q : *order) {
            if (q < 1 || q > kNumNuclei || std::count(order->begin(), order->end(), q) != 1) {
                throw std::invalid_argument("tomography: orders must list distinct nuclei");
            }
        }
        for (int q : qubits) {
            if (std::find(order->begin(), order->end(), q) == order->end()) {
                throw std::invalid_argument("tomography: orders must cover every measured nucleus");
            }
        }
    }
    for (const auto &s : settings) {
        if (s.size() != qubits.size()) {
            throw std::invalid_argument("tomography: setting size does not match qubit count");
        }
    }
    std::size_t full = 1;
    for (std::size_t k = 0; k < qubits.size(); ++k) {
        full *= 3;
    }
    if (settings.size() < full) {
        throw std::invalid_argument("tomography: insufficient settings for full Pauli reconstruction");
    }
}

TomographySettings TomographySettings::full(std::vector<int> qubits) {
    TomographySettings t;
    t.qubits = std::move(qubits);
    const int k = static_cast<int>(t.qubits.size());
    int total = 1;
    for (int i = 0; i < k; ++i) {
        total *= 3;
    }
    for (int s = 0; s < total; ++s) {
        std::vector<PauliBasis> b(k);
        int rest = s;
        for (int i = k - 1; i >= 0; --i) {
            b[i] = static_cast<PauliBasis>(rest % 3);
            rest /= 3;
        }
        t.settings.push_back(b);
    }
    for (int n : {3, 2, 1}) {
        if (std::count(t.qubits.begin(), t.qubits.end(), n)) {
            t.rotation_order.push_back(n);
        }
    }
    for (int n : {2, 3, 1}) {
        if (std::count(t.qubits.begin(), t.qubits.end(), n)) {
            t.readout_order.push_back(n);
        }
    }
    t.validate();
    return t;
}

GateSchedule basis_change(const Device &device, const TomographySettings &settings, int setting) {
    const auto &b = settings.settings.at(setting);
    GateSchedule s;
    s.name = "basis";
    for (int n : settings.rotation_order) {
        auto pos = std::find(settings.qubits.begin(), settings.qubits.end(), n) - settings.qubits.begin();
        switch (b[pos]) {
            case PauliBasis::X:
                s.then(nmr_pulse(device, n, Spin::Down, Axis::MinusY, kPi / 2));
                break;
            case PauliBasis::Y:
                s.then(nmr_pulse(device, n, Spin::Down, Axis::X, kPi / 2));
                break;
            case PauliBasis::Z:
                break;
        }
        s.name += basis_label(b[pos]);
    }
    return s;
}

TomographyData exact_tomography_data(const Device &device, const PureState &state,
                                     const TomographySettings &settings) {
    settings.validate();
    TomographyData d;
    d.settings = settings;
    for (int s = 0; s < settings.num_settings(); ++s) {
        PureState psi = state;
        run_schedule(device, psi, basis_change(device, settings, s), NoiseSample{});
        d.counts.push_back(outcome_probabilities(psi, settings.qubits));
    }
    return d;
}

std::map<std::string, double> pauli_expectations(const TomographyData &data) {
    const auto &st = data.settings;
    const int k = static_cast<int>(st.qubits.size());
    int labels = 1;
    for (int i = 0; i < k; ++i) {
        labels *= 4;
    }
    std::map<std::string, double> out;
    for (int code = 0; code < labels; ++code) {
        std::string label(k, 'I');
        int rest = code;
        for (int i = k - 1; i >= 0; --i) {
            label[i] = "IXYZ"[rest % 4];
            rest /= 4;
        }
        double sum = 0.0;
        int used = 0;
        for (int s = 0; s < st.num_settings(); ++s) {
            bool compatible = true;
            for (int i = 0; i < k; ++i) {
                if (label[i] != 'I' && label[i] != basis_label(st.settings[s][i])) {
                    compatible = false;
                }
            }
            double total = 0.0;
            for (double c : data.counts[s]) {
                total += c;
            }
            if (!compatible || total <= 0.0) {
                continue;
            }
            double e = 0.0;
            for (int o = 0; o < st.num_outcomes(); ++o) {
                int parity = 0;
                for (int i = 0; i < k; ++i) {
                    if (label[i] != 'I') {
                        parity ^= (o >> (k - 1 - i)) & 1;
                    }
                }
                e += (parity ? -1.0 : 1.0) * data.counts[s][o];
            }
            sum += e / total;
            ++used;
        }
        if (used == 0) {
            throw std::invalid_argument("tomography: no setting measures " + label);
        }
        out[label] = sum / used;
    }
    return out;
}

Matrix reconstruct_from_expectations(int num_qubits, const std::map<std::string, double> &expectations) {
    const int dim = 1 << num_qubits;
    Matrix rho = Matrix::Zero(dim, dim);
    for (const auto &[label, value] : expectations) {
        if (static_cast<int>(label.size()) != num_qubits) {
            throw std::invalid_argument("tomography: Pauli label length mismatch");
        }
        double v = label.find_first_not_of('I') == std::string::npos ? 1.0 : value;
        rho += v * pauli::string(label);
    }
    return rho / static_cast<double>(dim);
}

Matrix linear_inversion(const TomographyData &data) {
    data.settings.validate();
    if (data.counts.size() != data.settings.settings.size()) {
        throw std::invalid_argument("tomography: counts do not match settings");
    }
    return reconstruct_from_expectations(static_cast<int>(data.settings.qubits.size()), pauli_expectations(data));
}

DensityOperator nearest_physical(const Matrix &hermitian) {
    Matrix herm = 0.5 * (hermitian + hermitian.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("tomography: eigendecomposition failed");
    }
    Eigen::VectorXd mu = es.eigenvalues() / herm.trace().real();
    if (!mu.allFinite()) {
        throw std::runtime_error("tomography: reconstruction has no positive trace");
    }
    // Eigen sorts ascending; walk up from the smallest eigenvalue.
    const int d = static_cast<int>(mu.size());
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(d);
    double carry = 0.0;
    int i = 0;
    for (; i < d; ++i) {
        if (mu[i] + carry / (d - i) >= 0.0) {
            break;
        }
        carry += mu[i];
    }
    for (int k = i; k < d; ++k) {
        lambda[k] = mu[k] + carry / (d - i);
    }
    Matrix rho = es.eigenvectors() * lambda.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
    return DensityOperator(0.5 * (rho + rho.adjoint()));
}

namespace {

struct PauliStat {
    Matrix op;
    double value = 0.0;
    double sigma = 1.0;
};

// Mean over compatible settings and its variance, with the per-setting
// variance (1 - e^2) / N hedged by 1 / N^2 so deterministic outcomes keep a
// finite weight.
std::vector<PauliStat> pauli_statistics(const TomographyData &data) {
    const auto &st = data.settings;
    const int k = static_cast<int>(st.qubits.size());
    std::vector<PauliStat> out;
    for (const auto &[label, value] : pauli_expectations(data)) {
        if (label.find_first_not_of('I') == std::string::npos) {
            continue;
        }
        double var = 0.0;
        int used = 0;
        for (int s = 0; s < st.num_settings(); ++s) {
            bool compatible = true;
            for (int i = 0; i < k; ++i) {
                if (label[i] != 'I' && label[i] != basis_label(st.settings[s][i])) {
                    compatible = false;
                }
            }
            double total = 0.0;
            for (double c : data.counts[s]) {
                total += c;
            }
            if (!compatible || total <= 0.0) {
                continue;
            }
            double e = 0.0;
            for (int o = 0; o < st.num_outcomes(); ++o) {
                int parity = 0;
                for (int i = 0; i < k; ++i) {
                    if (label[i] != 'I') {
                        parity ^= (o >> (k - 1 - i)) & 1;
                    }
                }
                e += (parity ? -1.0 : 1.0) * data.counts[s][o];
            }
            e /= total;
            var += (std::max(1.0 - e * e, 0.0) + 1.0 / total) / total;
            ++used;
        }
        out.push_back({pauli::string(label), value, std::sqrt(var) / used});
    }
    return out;
}

bool is_positive(const Matrix &m, double tol = 1e-10) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
}

// rho = T T^dagger / tr(T T^dagger) with T lower triangular; parameters are
// the real diagonal followed by (re, im) of each strictly lower entry.
Matrix cholesky_factor(const std::vector<double> &theta, int d) {
    Matrix t = Matrix::Zero(d, d);
    std::size_t k = 0;
    for (int i = 0; i < d; ++i) {
        t(i, i) = theta[k++];
    }
    for (int i = 1; i < d; ++i) {
        for (int j = 0; j < i; ++j) {
            t(i, j) = Complex(theta[k], theta[k + 1]);
            k += 2;
        }
    }
    return t;
}

DensityOperator weighted_fit(const std::vector<PauliStat> &stats, const Matrix &raw) {
    const int d = static_cast<int>(raw.rows());
    const int np = d * d;
    const int nr = static_cast<int>(stats.size());
    Matrix start = nearest_physical(raw).matrix();
    start = 0.999 * start + 0.001 * Matrix::Identity(d, d) / static_cast<double>(d);
    Matrix l = Eigen::LLT<Matrix>(start).matrixL();
    std::vector<double> theta;
    for (int i = 0; i < d; ++i) {
        theta.push_back(l(i, i).real());
    }
    for (int i = 1; i < d; ++i) {
        for (int j = 0; j < i; ++j) {
            theta.push_back(l(i, j).real());
            theta.push_back(l(i, j).imag());
        }
    }
    auto evaluate = [&](const std::vector<double> &th, Eigen::VectorXd &r, Eigen::MatrixXd *jac) {
        Matrix t = cholesky_factor(th, d);
        Matrix a = t * t.adjoint();
        const double tr = a.trace().real();
        r.resize(nr);
        if (jac != nullptr) {
            jac->resize(nr, np);
        }
        for (int p = 0; p < nr; ++p) {
            const double x = (stats[p].op * a).trace().real() / tr;
            r[p] = (x - stats[p].value) / stats[p].sigma;
            if (jac == nullptr) {
                continue;
            }
            Matrix m = t.adjoint() * stats[p].op;
            int k = 0;
            auto put = [&](int i, int j, bool imag) {
                const double dp = imag ? -2.0 * m(j, i).imag() : 2.0 * m(j, i).real();
                const double dt = imag ? 2.0 * t(i, j).imag() : 2.0 * t(i, j).real();
                (*jac)(p, k++) = (dp - x * dt) / tr / stats[p].sigma;
            };
            for (int i = 0; i < d; ++i) {
                put(i, i, false);
            }
            for (int i = 1; i < d; ++i) {
                for (int j = 0; j < i; ++j) {
                    put(i, j, false);
                    put(i, j, true);
                }
            }
        }
    };
    Eigen::VectorXd r;
    Eigen::MatrixXd jac;
    evaluate(theta, r, &jac);
    double cost = r.squaredNorm();
    double lambda = 1e-3;
    for (int it = 0; it < 300; ++it) {
        Eigen::MatrixXd jtj = jac.transpose() * jac;
        Eigen::VectorXd g = jac.transpose() * r;
        bool improved = false;
        double drop = 0.0;
        while (lambda < 1e12) {
            Eigen::MatrixXd a = jtj;
            a.diagonal().array() += lambda * (jtj.diagonal().array().maxCoeff() + 1e-30);
            Eigen::VectorXd step = a.ldlt().solve(g);
            std::vector<double> trial = theta;
            for (int k = 0; k < np; ++k) {
                trial[k] -= step[k];
            }
            Eigen::VectorXd rt;
            evaluate(trial, rt, nullptr);
            const double ct = rt.squaredNorm();
            if (std::isfinite(ct) && ct < cost) {
                drop = cost - ct;
                theta = std::move(trial);
                cost = ct;
                lambda = std::max(lambda / 10, 1e-12);
                improved = true;
                break;
            }
            lambda *= 10;
        }
        if (!improved || drop <= 1e-10 * std::max(cost, 1.0)) {
            break;
        }
        evaluate(theta, r, &jac);
    }
    Matrix t = cholesky_factor(theta, d);
    Matrix a = t * t.adjoint();
    a /= a.trace().real();
    return DensityOperator(0.5 * (a + a.adjoint()));
}

}  // namespace

DensityOperator reconstruct(const TomographyData &data) {
    Matrix raw = linear_inversion(data);
    if (is_positive(raw)) {
        return nearest_physical(raw);
    }
    return weighted_fit(pauli_statistics(data), raw);
}

QstResult qst(const Device &device, const GateSchedule &circuit, const TomographySettings &settings,
              const PureState &target, const NoiseParams &noise, const MarkovReadoutModel &model,
              const ReadoutPolicy &policy, const QstOptions &options) {
    settings.validate();
    if (target.num_qubits() != static_cast<int>(settings.qubits.size())) {
        throw std::invalid_argument("qst: target must live on the measured nuclei");
    }
    if (options.shots_per_setting < 1) {
        throw std::invalid_argument("qst: shots per setting must be at least 1");
    }
    const int ns = settings.num_settings();
    std::vector<GateSchedule> schedules;
    for (int s = 0; s < ns; ++s) {
        GateSchedule full = circuit;
        full.then(basis_change(device, settings, s));
        schedules.push_back(std::move(full));
    }
    QstResult res;
    res.data.settings = settings;
    res.data.counts.assign(ns, std::vector<double>(settings.num_outcomes(), 0.0));
    const NoiseParams active = options.noise ? noise : NoiseParams::off();
    const std::uint64_t shots = options.shots_per_setting;
    if (!active.enabled() && !options.markov_readout) {
        for (int s = 0; s < ns; ++s) {
            PureState psi;
            run_schedule(device, psi, schedules[s], NoiseSample{});
            Rng rng = make_stream(options.seed, s);
            res.data.counts[s] = multinomial(outcome_probabilities(psi, settings.qubits), shots, rng);
        }
    } else {
        std::vector<int> outcome(static_cast<std::size_t>(ns) * shots, -1);
        parallel_for(outcome.size(), options.threads, [&](std::uint64_t idx) {
            const int s = static_cast<int>(idx / shots);
            Rng rng = make_stream(options.seed, idx);
            NoiseSample sample = sample_noise(active, rng);
            PureState psi;
            if (options.markov_readout && options.verify_init) {
                ReadoutOutcome v = read_register(model, policy, NuclearConfig(0), policy.start_order, rng);
                if (!v.all_accepted() || v.classified.bits() != 0) {
                    return;
                }
                psi = PureState::basis(v.post_state.bits());
            }
            run_schedule(device, psi, schedules[s], sample);
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
            if (options.markov_readout) {
                ReadoutOutcome r = read_register(model, policy, NuclearConfig(config), settings.readout_order, rng);
                if (!r.all_accepted()) {
                    return;
                }
                config = r.classified.bits();
            }
            outcome[idx] = config_outcome(config, settings.qubits);
        });
        for (std::uint64_t idx = 0; idx < outcome.size(); ++idx) {
            if (outcome[idx] >= 0) {
                res.data.counts[idx / shots][outcome[idx]] += 1.0;
            }
        }
    }
    res.attempted = shots * ns;
    for (const auto &c : res.data.counts) {
        for (double v : c) {
            res.retained += static_cast<std::uint64_t>(v);
        }
    }
    res.raw = linear_inversion(res.data);
    res.rho = reconstruct(res.data);
    res.projected = !is_positive(res.raw);
    res.fidelity = state_fidelity(res.rho, target);
    if (options.bootstrap > 0) {
        std::vector<double> fids(options.bootstrap);
        const std::uint64_t boot_seed = derive_seed(options.seed, 0xB007ULL);
        parallel_for(fids.size(), options.threads, [&](std::uint64_t b) {
            Rng rng = make_stream(boot_seed, b);
            TomographyData resampled;
            resampled.settings = settings;
            for (const auto &c : res.data.counts) {
                double total = 0.0;
                for (double v : c) {
                    total += v;
                }
                std::vector<double> p(c.size(), 0.0);
                for (std::size_t o = 0; o < c.size(); ++o) {
                    p[o] = total > 0.0 ? c[o] / total : 0.0;
                }
                resampled.counts.push_back(multinomial(p, static_cast<std::uint64_t>(total), rng));
            }
            fids[b] = state_fidelity(reconstruct(resampled), target);
        });
        double mean = 0.0;
        for (double f : fids) {
            mean += f;
        }
        mean /= fids.size();
        double var = 0.0;
        for (double f : fids) {
            var += (f - mean) * (f - mean);
        }
        res.sigma = fids.size() > 1 ? std::sqrt(var / (fids.size() - 1)) : 0.0;
    }
    return res;
}

void write_counts_csv(std::ostream &out, const TomographyData &data) {
    out << "setting";
    for (int o = 0; o < data.settings.num_outcomes(); ++o) {
        out << ",outcome_" << o;
    }
    out << "\n";
    for (int s = 0; s < data.settings.num_settings(); ++s) {
        for (PauliBasis b : data.settings.settings[s]) {
            out << basis_label(b);
        }
        for (double c : data.counts[s]) {
            out << "," << c;
        }
        out << "\n";
    }
}

}  // namespace spinreg
