// Copyright 2026 The vpmetro Authors
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

#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vpm/closedform.hpp"
#include "vpm/errors.hpp"
#include "vpm/noise.hpp"
#include "vpm/rng.hpp"

namespace vpm {

// Brute-force reference: dense density matrices built gate by gate, used
// only to validate the closed forms.
//
// Qubit basis index bit j is the value of qubit j; |1> has sigma_z = +1.
// Qutrit basis is {|1>, |0>, |-1>} with sigma_z = {+1, 0, -1}.

using cplx = std::complex<double>;

constexpr int64_t kMaxOracleSites = 12;

struct DenseState {
    Eigen::MatrixXcd rho;

    Eigen::Index dim() const { return rho.rows(); }

    double trace() const { return rho.trace().real(); }

    double hermiticity_residual() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }

    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }
};

inline Eigen::VectorXcd ghz_vector(int64_t L) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(int64_t{1} << L);
    v(0) = v((int64_t{1} << L) - 1) = 1 / std::sqrt(2.0);
    return v;
}

/// (|0...0> - i|1...1>)/sqrt(2) for qubits, (|-1> - i|1>)/sqrt(2) for the qutrit.
inline Eigen::VectorXcd y_vector(NoiseModel model, int64_t L) {
    if (model == NoiseModel::QutritDepolarizing) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(3);
        v(2) = 1 / std::sqrt(2.0);
        v(0) = cplx(0, -1 / std::sqrt(2.0));
        return v;
    }
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(int64_t{1} << L);
    v(0) = 1 / std::sqrt(2.0);
    v((int64_t{1} << L) - 1) = cplx(0, -1 / std::sqrt(2.0));
    return v;
}

inline DenseState pure_state(const Eigen::VectorXcd &psi) { return {psi * psi.adjoint()}; }

inline Eigen::MatrixXcd projector_y(NoiseModel model, int64_t L) { return pure_state(y_vector(model, L)).rho; }

/// Initial probe: GHZ for qubit models, |+> = (|1>+|-1>)/sqrt(2) for the qutrit.
inline Eigen::VectorXcd initial_vector(NoiseModel model, int64_t L) {
    if (model == NoiseModel::QutritDepolarizing) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(3);
        v(0) = v(2) = 1 / std::sqrt(2.0);
        return v;
    }
    return ghz_vector(L);
}

/// Diagonal of exp(-iHt), H = sum_j omega sigma_z^(j)/2.
inline Eigen::VectorXcd zeeman_phases(NoiseModel model, int64_t L, double omega, double t) {
    if (model == NoiseModel::QutritDepolarizing) {
        Eigen::VectorXcd ph(3);
        for (int k = 0; k < 3; k++) ph(k) = std::polar(1.0, -omega * t * (1 - k) / 2);
        return ph;
    }
    int64_t d = int64_t{1} << L;
    Eigen::VectorXcd ph(d);
    for (int64_t k = 0; k < d; k++) {
        double ones = std::popcount(static_cast<uint64_t>(k));
        double sz = 2 * ones - static_cast<double>(L);
        ph(k) = std::polar(1.0, -omega * t * sz / 2);
    }
    return ph;
}

inline void apply_diagonal_unitary(Eigen::MatrixXcd &rho, const Eigen::VectorXcd &phases) {
    rho = phases.asDiagonal() * rho * phases.conjugate().asDiagonal();
}

/// Applies a single-qubit Kraus set to qubit `site` of an L-qubit register.
inline Eigen::MatrixXcd apply_site_kraus(const Eigen::MatrixXcd &rho, const KrausSet &ks, int64_t site) {
    const int64_t d = rho.rows();
    const int64_t bit = int64_t{1} << site;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
    for (const auto &k : ks.operators) {
        for (int64_t r = 0; r < d; r++) {
            int rb = (r & bit) ? 1 : 0;
            int64_t r0 = r & ~bit;
            for (int64_t c = 0; c < d; c++) {
                int cb = (c & bit) ? 1 : 0;
                int64_t c0 = c & ~bit;
                cplx acc = 0;
                for (int x = 0; x < 2; x++) {
                    cplx kr = k(rb, x);
                    if (kr == cplx(0)) continue;
                    for (int y = 0; y < 2; y++) {
                        cplx kc = k(cb, y);
                        if (kc == cplx(0)) continue;
                        acc += kr * rho(r0 | (x ? bit : 0), c0 | (y ? bit : 0)) * std::conj(kc);
                    }
                }
                out(r, c) += acc;
            }
        }
    }
    return out;
}

inline DenseState apply_noise(NoiseModel model, DenseState state, const RunParams &run, double eps, int64_t L) {
    switch (model) {
        case NoiseModel::LocalAmplitudeDamping:
        case NoiseModel::GeneralizedAmplitudeDamping: {
            auto ks = kraus_set(model, eps, model == NoiseModel::LocalAmplitudeDamping ? 1.0 : run.excitation_p);
            for (int64_t j = 0; j < L; j++) state.rho = apply_site_kraus(state.rho, ks, j);
            return state;
        }
        case NoiseModel::GlobalDepolarizing: {
            auto d = state.dim();
            state.rho = (1 - eps) * state.rho +
                        (eps / static_cast<double>(d)) * Eigen::MatrixXcd::Identity(d, d);
            return state;
        }
        case NoiseModel::QutritDepolarizing:
            state.rho = kraus_set(model, eps).apply(state.rho);
            return state;
    }
    return state;
}

/// rho_i(t) = E(eps_i)[exp(-iHt) rho(0) exp(iHt)].
inline DenseState build_evolved_state(NoiseModel model, const RunParams &run, double omega, double t, int64_t L,
                                      DecayProfile profile) {
    if (model == NoiseModel::QutritDepolarizing) {
        L = 1;
    } else {
        if (L < 1) throw DomainError("build_evolved_state: L must be >= 1");
        if (L > kMaxOracleSites) throw ResourceError("build_evolved_state: L above the dense-oracle guard");
    }
    double eps = error_rate(t, run.t1, profile);
    auto state = pure_state(initial_vector(model, L));
    apply_diagonal_unitary(state.rho, zeeman_phases(model, L, omega, t));
    return apply_noise(model, std::move(state), run, eps, L);
}

inline Eigen::MatrixXcd matrix_power(const Eigen::MatrixXcd &m, int n) {
    Eigen::MatrixXcd out = m;
    for (int k = 1; k < n; k++) out = out * m;
    return out;
}

inline double trace_power(const DenseState &state, int n) {
    if (n < 1) throw DomainError("trace_power: n must be >= 1");
    return matrix_power(state.rho, n).trace().real();
}

/// Tr[rho^n P].
inline double projector_overlap(const DenseState &state, int n, const Eigen::MatrixXcd &P) {
    if (n < 1) throw DomainError("projector_overlap: n must be >= 1");
    return (matrix_power(state.rho, n) * P).trace().real();
}

/// Oracle moments: a and u from the dense state at omega = 0, v from a
/// centered finite difference of Tr[rho^n P_y] in omega.
inline RunMoments oracle_moments(NoiseModel model, const RunParams &run, double t, int64_t L, int n,
                                 DecayProfile profile, double fd_step = 1e-5) {
    auto P = projector_y(model, model == NoiseModel::QutritDepolarizing ? 1 : L);
    auto s0 = build_evolved_state(model, run, 0, t, L, profile);
    auto sp = build_evolved_state(model, run, fd_step, t, L, profile);
    auto sm = build_evolved_state(model, run, -fd_step, t, L, profile);
    RunMoments m;
    m.a = trace_power(s0, n);
    m.u = projector_overlap(s0, n, P);
    m.v = (projector_overlap(sp, n, P) - projector_overlap(sm, n, P)) / (2 * fd_step);
    return m;
}

/// (1/N) sum_i rho_i^n over a schedule, unnormalized.
inline Eigen::MatrixXcd mean_power_state(NoiseModel model, std::span<const RunParams> schedule, double omega,
                                         double t, int64_t L, int n, DecayProfile profile) {
    Eigen::MatrixXcd acc;
    for (const auto &r : schedule) {
        auto s = build_evolved_state(model, r, omega, t, L, profile);
        Eigen::MatrixXcd p = matrix_power(s.rho, n);
        if (acc.size() == 0) {
            acc = p;
        } else {
            acc += p;
        }
    }
    return acc / static_cast<double>(schedule.size());
}

struct EigenOverlap {
    double fidelity = 0;          // <psi| M |psi> / Tr M
    double dominant_overlap = 0;  // |<v_max|psi>|^2
    double dominant_weight = 0;   // largest eigenvalue of M / Tr M
};

/// Filtering / coherent-mismatch diagnostic for a (possibly unnormalized)
/// purified ensemble M = mean rho_i^n against the ideal pure state.
inline EigenOverlap dominant_eigen_overlap(const Eigen::MatrixXcd &mean_power, const Eigen::VectorXcd &ideal) {
    double tr = mean_power.trace().real();
    if (!(tr > 0)) throw DegeneracyError("dominant_eigen_overlap: non-positive trace");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mean_power);
    Eigen::Index top = es.eigenvalues().size() - 1;
    EigenOverlap o;
    o.fidelity = (ideal.adjoint() * mean_power * ideal)(0, 0).real() / tr;
    o.dominant_overlap = std::norm(es.eigenvectors().col(top).dot(ideal));
    o.dominant_weight = es.eigenvalues()(top) / tr;
    return o;
}

struct McResult {
    double mean_o = 0;   // mean of S_num/S_denom  (<Y>_mit estimator)
    double var_o = 0;
    double mean_py = 0;  // mean of (S_denom + S_num)/(2 S_denom)
    double var_py = 0;
    int64_t resampled = 0;
    std::vector<double> py_samples;
};

/// Shot-level Monte Carlo of the mitigation protocol at omega = 0. Each entry
/// of `runs` contributes one numerator shot (mean Tr[rho_i^n Y]) and one
/// denominator shot (mean Tr[rho_i^n]); each repetition averages them into
/// S_num, S_denom. Repetitions with S_denom == 0 are redrawn and counted.
inline McResult mc_shot_experiment(std::span<const RunMoments> runs, int64_t repetitions, uint64_t seed) {
    if (runs.empty()) throw ConfigError("mc_shot_experiment: no runs");
    if (repetitions < 2) throw ConfigError("mc_shot_experiment: need at least two repetitions");
    const auto N = static_cast<int64_t>(runs.size());
    std::vector<double> p_num(runs.size()), p_den(runs.size());
    for (size_t i = 0; i < runs.size(); i++) {
        p_num[i] = (1 + runs[i].b()) / 2;
        p_den[i] = (1 + runs[i].a) / 2;
    }
    McResult res;
    res.py_samples.reserve(static_cast<size_t>(repetitions));
    std::vector<double> o_samples;
    o_samples.reserve(static_cast<size_t>(repetitions));
    for (int64_t r = 0; r < repetitions; r++) {
        for (uint64_t attempt = 0;; attempt++) {
            uint64_t s = derive_seed(seed, static_cast<uint64_t>(r), attempt);
            int64_t num = 0, den = 0;
            for (int64_t i = 0; i < N; i++) {
                num += counter_uniform(s, 1, static_cast<uint64_t>(i)) < p_num[i] ? 1 : -1;
                den += counter_uniform(s, 2, static_cast<uint64_t>(i)) < p_den[i] ? 1 : -1;
            }
            if (den == 0) {
                res.resampled++;
                continue;
            }
            double s_num = static_cast<double>(num) / static_cast<double>(N);
            double s_den = static_cast<double>(den) / static_cast<double>(N);
            o_samples.push_back(s_num / s_den);
            res.py_samples.push_back((s_den + s_num) / (2 * s_den));
            break;
        }
    }
    auto moments = [](const std::vector<double> &xs, double &mean, double &var) {
        mean = 0;
        for (double x : xs) mean += x;
        mean /= static_cast<double>(xs.size());
        var = 0;
        for (double x : xs) var += (x - mean) * (x - mean);
        var /= static_cast<double>(xs.size() - 1);
    };
    moments(o_samples, res.mean_o, res.var_o);
    moments(res.py_samples, res.mean_py, res.var_py);
    return res;
}

/// Bootstrap standard error of the sample variance.
inline double bootstrap_variance_se(std::span<const double> xs, int resamples, uint64_t seed) {
    if (xs.size() < 2 || resamples < 2) throw ConfigError("bootstrap: not enough data");
    const auto n = xs.size();
    std::vector<double> vars;
    vars.reserve(static_cast<size_t>(resamples));
    for (int b = 0; b < resamples; b++) {
        double mean = 0, sq = 0;
        for (size_t i = 0; i < n; i++) {
            auto j = static_cast<size_t>(counter_uniform(seed, static_cast<uint64_t>(b), i) * static_cast<double>(n));
            double x = xs[std::min(j, n - 1)];
            mean += x;
            sq += x * x;
        }
        mean /= static_cast<double>(n);
        vars.push_back((sq - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1));
    }
    double m = 0;
    for (double v : vars) m += v;
    m /= static_cast<double>(vars.size());
    double s = 0;
    for (double v : vars) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(vars.size() - 1));
}

}  // namespace vpm
