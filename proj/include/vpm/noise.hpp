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

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "vpm/errors.hpp"
#include "vpm/rng.hpp"

namespace vpm {

enum class NoiseModel {
    LocalAmplitudeDamping,
    GeneralizedAmplitudeDamping,
    GlobalDepolarizing,
    QutritDepolarizing,
};

/// Time law of the per-run error rate.
enum class DecayProfile {
    Markovian,          // 1 - exp(-t/T1)
    TimeInhomogeneous,  // 1 - exp(-(t/T1)^2)
};

inline std::string_view to_string(NoiseModel m) {
    switch (m) {
        case NoiseModel::LocalAmplitudeDamping: return "local_ad";
        case NoiseModel::GeneralizedAmplitudeDamping: return "gad";
        case NoiseModel::GlobalDepolarizing: return "global_depol";
        case NoiseModel::QutritDepolarizing: return "qutrit_depol";
    }
    return "?";
}

inline std::string_view to_string(DecayProfile p) {
    return p == DecayProfile::Markovian ? "markovian" : "time_inhomogeneous";
}

inline NoiseModel parse_noise_model(std::string_view s) {
    for (auto m : {NoiseModel::LocalAmplitudeDamping, NoiseModel::GeneralizedAmplitudeDamping,
                   NoiseModel::GlobalDepolarizing, NoiseModel::QutritDepolarizing}) {
        if (s == to_string(m)) return m;
    }
    throw ConfigError("unknown noise model '" + std::string(s) + "'");
}

inline DecayProfile parse_decay_profile(std::string_view s) {
    if (s == "markovian") return DecayProfile::Markovian;
    if (s == "time_inhomogeneous") return DecayProfile::TimeInhomogeneous;
    throw ConfigError("unknown decay profile '" + std::string(s) + "'");
}

/// Linear drift of a dimensionless parameter across runs plus independent
/// uniform fluctuation on [-fluct_halfwidth, +fluct_halfwidth].
struct DriftSpec {
    double start = 1.0;
    double end = 1.0;
    double fluct_halfwidth = 0.0;
    uint64_t seed = 0;

    static DriftSpec constant(double value) { return {value, value, 0.0, 0}; }
};

/// Noise parameters realized in one experimental run. All 2n copies of a
/// run share them.
struct RunParams {
    int64_t run_index = 0;
    double t1 = 1.0;
    double beta = INFINITY;      // GAD only
    double gamma = 1.0;          // GAD only
    double excitation_p = 1.0;   // GAD only; 1 is the zero-temperature limit
};

inline double error_rate(double t, double t1, DecayProfile profile) {
    if (!(t1 > 0)) throw DomainError("error_rate: t1 must be positive");
    if (!(t >= 0)) throw DomainError("error_rate: t must be non-negative");
    double r = t / t1;
    double exponent = profile == DecayProfile::Markovian ? r : r * r;
    return -std::expm1(-exponent);
}

/// Value of run i (1-based) of n_runs, before and including fluctuation.
/// The ramp uses i/n_runs, so run n_runs sits exactly at `end`.
inline std::vector<double> drift_values(const DriftSpec &spec, int64_t n_runs) {
    if (n_runs < 1) throw ConfigError("drift schedule needs at least one run");
    if (!(spec.fluct_halfwidth >= 0)) throw ConfigError("drift fluctuation half-width must be non-negative");
    if (!(spec.start > spec.fluct_halfwidth && spec.end > spec.fluct_halfwidth)) {
        throw ConfigError("drift schedule can produce non-positive values (start/end must exceed fluct_halfwidth)");
    }
    std::vector<double> out(static_cast<size_t>(n_runs));
    double span = spec.end - spec.start;
    double h = spec.fluct_halfwidth;
    for (int64_t i = 1; i <= n_runs; i++) {
        double v = spec.start + span * static_cast<double>(i) / static_cast<double>(n_runs);
        if (h > 0) {
            v += counter_uniform(spec.seed, 0, static_cast<uint64_t>(i), -h, h);
        }
        out[static_cast<size_t>(i - 1)] = v;
    }
    return out;
}

/// Coherence-time schedule: T1 of run i drifts per `spec`.
inline std::vector<RunParams> drift_schedule(const DriftSpec &spec, int64_t n_runs) {
    auto t1 = drift_values(spec, n_runs);
    std::vector<RunParams> runs(t1.size());
    for (size_t i = 0; i < runs.size(); i++) {
        runs[i].run_index = static_cast<int64_t>(i) + 1;
        runs[i].t1 = t1[i];
    }
    return runs;
}

struct GadParams {
    double excitation_p;
    double t1;
};

/// Finite-temperature amplitude damping: p = 1/(1+e^-beta), T1 = 1/((2N+1) gamma)
/// with thermal occupation N = 1/(e^beta - 1), i.e. T1 = tanh(beta/2)/gamma.
inline GadParams gad_params(double beta, double gamma) {
    if (!(beta > 0)) throw DomainError("gad_params: beta must be positive");
    if (!(gamma > 0)) throw DomainError("gad_params: gamma must be positive");
    double p = 1.0 / (1.0 + std::exp(-beta));
    double t1 = std::tanh(beta / 2) / gamma;
    return {p, t1};
}

inline RunParams gad_run(int64_t run_index, double beta, double gamma) {
    auto g = gad_params(beta, gamma);
    RunParams r;
    r.run_index = run_index;
    r.beta = beta;
    r.gamma = gamma;
    r.t1 = g.t1;
    r.excitation_p = g.excitation_p;
    return r;
}

/// Joint schedule for generalized amplitude damping; beta and gamma drift
/// independently (the two specs should carry different seeds).
inline std::vector<RunParams> gad_drift_schedule(const DriftSpec &beta, const DriftSpec &gamma, int64_t n_runs) {
    auto bs = drift_values(beta, n_runs);
    auto gs = drift_values(gamma, n_runs);
    std::vector<RunParams> runs(bs.size());
    for (size_t i = 0; i < runs.size(); i++) {
        runs[i] = gad_run(static_cast<int64_t>(i) + 1, bs[i], gs[i]);
    }
    return runs;
}

struct KrausSet {
    std::vector<Eigen::MatrixXcd> operators;

    Eigen::Index dim() const { return operators.empty() ? 0 : operators.front().rows(); }

    /// Max elementwise |sum_k K_k^dag K_k - I|.
    double completeness_residual() const {
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim(), dim());
        for (const auto &k : operators) acc += k.adjoint() * k;
        acc -= Eigen::MatrixXcd::Identity(dim(), dim());
        return acc.cwiseAbs().maxCoeff();
    }

    Eigen::MatrixXcd apply(const Eigen::MatrixXcd &rho) const {
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
        for (const auto &k : operators) out += k * rho * k.adjoint();
        return out;
    }
};

namespace detail {

inline Eigen::MatrixXcd mat2(double a, double b, double c, double d) {
    Eigen::MatrixXcd m(2, 2);
    m << a, b, c, d;
    return m;
}

// Qutrit Weyl operators X^a Z^b, a, b in {0,1,2}.
inline Eigen::MatrixXcd weyl3(int a, int b) {
    const std::complex<double> w = std::polar(1.0, 2 * M_PI / 3);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
    for (int j = 0; j < 3; j++) {
        m((j + a) % 3, j) = std::pow(w, b * j);
    }
    return m;
}

}  // namespace detail

/// Single-site Kraus operators. Basis order is {|0>, |1>} for qubits and
/// {|1>, |0>, |-1>} for the qutrit. Global depolarizing noise acts on the
/// whole register and has no site-local set.
inline KrausSet kraus_set(NoiseModel model, double eps, double excitation_p = 1.0) {
    if (!(eps >= 0 && eps <= 1)) throw DomainError("kraus_set: eps must lie in [0, 1]");
    KrausSet ks;
    switch (model) {
        case NoiseModel::LocalAmplitudeDamping:
            ks.operators.push_back(detail::mat2(1, 0, 0, std::sqrt(1 - eps)));
            ks.operators.push_back(detail::mat2(0, std::sqrt(eps), 0, 0));
            break;
        case NoiseModel::GeneralizedAmplitudeDamping: {
            double p = excitation_p;
            if (!(p >= 0 && p <= 1)) throw DomainError("kraus_set: excitation_p must lie in [0, 1]");
            double sp = std::sqrt(p), sq = std::sqrt(1 - p);
            ks.operators.push_back(sp * detail::mat2(1, 0, 0, std::sqrt(1 - eps)));
            ks.operators.push_back(sp * detail::mat2(0, std::sqrt(eps), 0, 0));
            ks.operators.push_back(sq * detail::mat2(std::sqrt(1 - eps), 0, 0, 1));
            ks.operators.push_back(sq * detail::mat2(0, 0, std::sqrt(eps), 0));
            break;
        }
        case NoiseModel::QutritDepolarizing:
            // (1-eps) rho + eps I/3 == (1 - 8eps/9) rho + (eps/9) sum_{(a,b) != 0} W rho W^dag
            for (int a = 0; a < 3; a++) {
                for (int b = 0; b < 3; b++) {
                    double w = (a == 0 && b == 0) ? 1 - 8 * eps / 9 : eps / 9;
                    ks.operators.push_back(std::sqrt(w) * detail::weyl3(a, b));
                }
            }
            break;
        case NoiseModel::GlobalDepolarizing:
            throw DomainError("kraus_set: global depolarizing noise has no site-local Kraus set");
    }
    return ks;
}

}  // namespace vpm
