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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "vpm/errors.hpp"
#include "vpm/noise.hpp"

namespace vpm {

// Per-run moments of the purified state and their run averages. All
// quantities are evaluated at omega = 0 together with their exact first
// derivative in omega:
//
//   Tr[rho_i^n]       = a
//   Tr[rho_i^n P_y]   = u + v * omega + O(omega^2)
//   Tr[rho_i^n Y]     = 2u - a            (at omega = 0)

/// Log-space power helpers. Bases are non-negative; 0^0 == 1.
inline double pow_nonneg(double base, double exponent) {
    if (exponent == 0) return 1.0;
    if (base == 0) return 0.0;
    return std::exp(exponent * std::log(base));
}

/// (1 - eps)^k without cancellation for small eps.
inline double pow_one_minus(double eps, double k) {
    if (k == 0) return 1.0;
    if (eps >= 1) return 0.0;
    return std::exp(k * std::log1p(-eps));
}

/// sum_{k=1}^{L-1} C(L,k) P^k Q^(L-k) for P, Q >= 0.
///
/// Evaluated as m^L [ (1+r)^L - 1 - r^L ] with m = max(P,Q), r = min/max,
/// so there is no cancellation against the k = 0 and k = L endpoint terms
/// and no overflow for L in the thousands.
inline double binomial_interior(double p, double q, int64_t L) {
    if (L < 2) return 0.0;
    double m = std::max(p, q);
    if (m == 0) return 0.0;
    double r = std::min(p, q) / m;
    if (r == 0) return 0.0;
    double Ld = static_cast<double>(L);
    double g = Ld * std::log1p(r);  // ln (1+r)^L
    double rL = pow_nonneg(r, Ld);
    double log_bracket;
    if (g < 700) {
        log_bracket = std::log(std::expm1(g) - rL);
    } else {
        log_bracket = g + std::log1p(-std::exp(-g) * (1 + rL));
    }
    return std::exp(Ld * std::log(m) + log_bracket);
}

/// Eigen-decomposition of the coherent 2x2 block
///   [[a, b], [b, c]]   on {|1...1>, |0...0>}
/// of 2*rho. `det` = a*c - b^2 is passed in analytically so the small
/// eigenvalue never suffers cancellation.
struct SpectralData {
    double lambda_plus = 0;
    double lambda_minus = 0;
    double cos2theta = 0;
    double sin2theta = 0;
};

inline SpectralData spectral_from_block(double a, double b, double c, double det) {
    double disc = std::sqrt(std::max((a - c) * (a - c) + 4 * b * b, 0.0));
    SpectralData s;
    s.lambda_plus = (a + c + disc) / 2;
    s.lambda_minus = s.lambda_plus > 0 ? std::max(det, 0.0) / s.lambda_plus : 0.0;
    s.cos2theta = (a - c) / disc;
    s.sin2theta = 2 * b / disc;
    return s;
}

/// Local amplitude damping on an L-qubit GHZ state.
inline SpectralData spectral_local_ad(double eps, int64_t L) {
    if (!(eps >= 0 && eps <= 1)) throw DomainError("spectral_local_ad: eps must lie in [0, 1]");
    if (L < 1) throw DomainError("spectral_local_ad: L must be >= 1");
    double Ld = static_cast<double>(L);
    double ones = pow_one_minus(eps, Ld);    // population weight of |1...1>
    double zeros = 1 + pow_nonneg(eps, Ld);  // population weight of |0...0>
    double coh = pow_one_minus(eps, Ld / 2);
    double det = ones * pow_nonneg(eps, Ld);
    return spectral_from_block(ones, coh, zeros, det);
}

/// Generalized (finite-temperature) amplitude damping with excitation weight p.
inline SpectralData spectral_gad(double eps, double p, int64_t L) {
    if (!(eps >= 0 && eps <= 1)) throw DomainError("spectral_gad: eps must lie in [0, 1]");
    if (!(p >= 0 && p <= 1)) throw DomainError("spectral_gad: p must lie in [0, 1]");
    if (L < 1) throw DomainError("spectral_gad: L must be >= 1");
    double Ld = static_cast<double>(L);
    double alpha = p * eps, beta = 1 - p * eps;
    double gamma = (1 - p) * eps, delta = 1 - (1 - p) * eps;
    double bL = pow_nonneg(beta, Ld), gL = pow_nonneg(gamma, Ld);
    double aL = pow_nonneg(alpha, Ld), dL = pow_nonneg(delta, Ld);
    double ones = bL + gL;
    double zeros = dL + aL;
    double coh = pow_one_minus(eps, Ld / 2);
    // (beta*delta)^L - (1-eps)^L with beta*delta = 1 - eps + p(1-p) eps^2
    double extra = p * (1 - p) * eps * eps;
    double lead;
    if (eps < 1) {
        double base = pow_one_minus(eps, Ld);
        lead = base * std::expm1(Ld * std::log1p(extra / (1 - eps)));
    } else {
        lead = pow_nonneg(extra, Ld);
    }
    double det = lead + bL * aL + gL * dL + gL * aL;
    return spectral_from_block(ones, coh, zeros, det);
}

struct RunMoments {
    double a = 1;  // Tr[rho^n]
    double u = 0;  // Tr[rho^n P_y] at omega = 0
    double v = 0;  // d/domega Tr[rho^n P_y] at omega = 0
    /// Part of Tr[rho^n] carried by the error states (everything but the
    /// ideal/dominant sector); feeds the Renyi entropy of the error states.
    double error_weight = 0;

    double b() const { return 2 * u - a; }  // Tr[rho^n Y]
};

/// How the qutrit model aggregates the accumulated phase into y.
enum class QutritPhase {
    PerSiteT,  // y carries t; the L sites enter through the sample count
    PrintedLt, // y carries L*t
};

inline std::string_view to_string(QutritPhase q) {
    return q == QutritPhase::PerSiteT ? "per_qubit_t" : "printed_Lt";
}

inline QutritPhase parse_qutrit_phase(std::string_view s) {
    if (s == "per_qubit_t") return QutritPhase::PerSiteT;
    if (s == "printed_Lt") return QutritPhase::PrintedLt;
    throw ConfigError("unknown qutrit_y_factor '" + std::string(s) + "'");
}

namespace detail {

inline void check_counts(int64_t L, int n) {
    if (L < 1) throw DomainError("number of sites L must be >= 1");
    if (n < 1) throw DomainError("number of copies n must be >= 1");
}

inline void check_eps(double eps) {
    if (!(eps >= 0 && eps <= 1)) throw DomainError("error rate must lie in [0, 1]");
}

inline RunMoments moments_from_block(const SpectralData &s, double interior, double t, int64_t L, int n) {
    double nd = n;
    double lp = pow_nonneg(s.lambda_plus, nd);
    double lm = pow_nonneg(s.lambda_minus, nd);
    double scale = std::ldexp(1.0, -n);
    RunMoments m;
    m.a = std::min(scale * (lp + lm + interior), 1.0);  // Tr[rho^n] <= 1; trims roundoff at n = 1
    m.u = scale / 2 * (lp + lm);
    m.v = scale / 2 * (lp - lm) * s.sin2theta * static_cast<double>(L) * t;
    m.error_weight = scale * interior;
    return m;
}

}  // namespace detail

inline RunMoments run_moments_local_ad(double eps, double t, int64_t L, int n) {
    detail::check_eps(eps);
    detail::check_counts(L, n);
    auto s = spectral_local_ad(eps, L);
    double interior = binomial_interior(pow_nonneg(eps, n), pow_one_minus(eps, n), L);
    return detail::moments_from_block(s, interior, t, L, n);
}

inline RunMoments run_moments_local_ad(const RunParams &run, double t, int64_t L, int n, DecayProfile profile) {
    return run_moments_local_ad(error_rate(t, run.t1, profile), t, L, n);
}

inline RunMoments run_moments_gad(double eps, double p, double t, int64_t L, int n) {
    detail::check_eps(eps);
    detail::check_counts(L, n);
    auto s = spectral_gad(eps, p, L);
    double alpha = p * eps, beta = 1 - p * eps;
    double gamma = (1 - p) * eps, delta = 1 - (1 - p) * eps;
    // sum_k C(L,k) A_k^n with A_k = alpha^k beta^(L-k) + gamma^(L-k) delta^k,
    // expanded binomially in the power n.
    double interior = 0;
    double cnj = 1;
    for (int j = 0; j <= n; j++) {
        double pj = pow_nonneg(alpha, j) * pow_nonneg(delta, n - j);
        double qj = pow_nonneg(beta, j) * pow_nonneg(gamma, n - j);
        interior += cnj * binomial_interior(pj, qj, L);
        cnj = cnj * (n - j) / (j + 1);
    }
    return detail::moments_from_block(s, interior, t, L, n);
}

inline RunMoments run_moments_gad(const RunParams &run, double t, int64_t L, int n, DecayProfile profile) {
    return run_moments_gad(error_rate(t, run.t1, profile), run.excitation_p, t, L, n);
}

/// ln(2^L - 1), exact for small L and without overflow for large L.
inline double log_error_state_count(int64_t L) {
    double Ld = static_cast<double>(L);
    return Ld * std::log(2.0) + std::log1p(-std::ldexp(1.0, static_cast<int>(-std::min<int64_t>(L, 1100))));
}

inline RunMoments run_moments_global_depol(double eps, double t, int64_t L, int n) {
    detail::check_eps(eps);
    detail::check_counts(L, n);
    double eps_eff = eps * (1 - std::ldexp(1.0, static_cast<int>(-std::min<int64_t>(L, 1100))));
    double log_q = -log_error_state_count(L);
    double nd = n;
    double ideal = pow_one_minus(eps_eff, nd);
    double w_n = eps_eff == 0 ? 0.0 : std::exp(nd * (std::log(eps_eff) + log_q));
    double w_n1 = eps_eff == 0 ? 0.0 : std::exp(nd * std::log(eps_eff) + (nd - 1) * log_q);
    RunMoments m;
    m.a = ideal + w_n1;
    m.u = (ideal + w_n) / 2;
    m.v = (ideal - w_n) * static_cast<double>(L) * t / 2;
    m.error_weight = w_n1;
    return m;
}

inline RunMoments run_moments_global_depol(const RunParams &run, double t, int64_t L, int n, DecayProfile profile) {
    return run_moments_global_depol(error_rate(t, run.t1, profile), t, L, n);
}

inline RunMoments run_moments_qutrit_depol(double eps, double t, int64_t L, int n,
                                           QutritPhase phase = QutritPhase::PerSiteT) {
    detail::check_eps(eps);
    detail::check_counts(L, n);
    double nd = n;
    double ideal = pow_nonneg(1 - 2 * eps / 3, nd);
    double w = pow_nonneg(eps / 3, nd);
    double phase_factor = phase == QutritPhase::PerSiteT ? t : static_cast<double>(L) * t;
    RunMoments m;
    m.a = ideal + 2 * w;
    m.u = (ideal + w) / 2;
    m.v = (ideal - w) * phase_factor / 2;
    m.error_weight = 2 * w;
    return m;
}

inline RunMoments run_moments_qutrit_depol(const RunParams &run, double t, int64_t L, int n, DecayProfile profile,
                                           QutritPhase phase = QutritPhase::PerSiteT) {
    return run_moments_qutrit_depol(error_rate(t, run.t1, profile), t, L, n, phase);
}

/// General incoherent noise: with probability eps the GHZ state is replaced
/// by error state k with probability p_vec[k]; p_vec[perp_index] belongs to
/// the evolved GHZ_perp state, the only error state visible to P_y.
inline RunMoments run_moments_generic_incoherent(double eps, std::span<const double> p_vec, size_t perp_index,
                                                 double t, int64_t L, int n) {
    detail::check_eps(eps);
    detail::check_counts(L, n);
    if (perp_index >= p_vec.size()) throw DomainError("generic incoherent: perp_index out of range");
    double sum = 0, norm = 0;
    for (double p : p_vec) {
        if (!(p >= 0)) throw DomainError("generic incoherent: negative probability");
        sum += p;
        norm += pow_nonneg(p, n);
    }
    if (std::abs(sum - 1) > 1e-12) throw DomainError("generic incoherent: p_vec must sum to 1");
    double nd = n;
    double ideal = pow_one_minus(eps, nd);
    double en = pow_nonneg(eps, nd);
    double perp = pow_nonneg(p_vec[perp_index], nd);
    RunMoments m;
    m.a = ideal + en * norm;
    m.u = (ideal + en * perp) / 2;
    m.v = (ideal - en * perp) * static_cast<double>(L) * t / 2;
    m.error_weight = en * norm;
    return m;
}

inline RunMoments run_moments(NoiseModel model, const RunParams &run, double t, int64_t L, int n,
                              DecayProfile profile, QutritPhase phase = QutritPhase::PerSiteT) {
    switch (model) {
        case NoiseModel::LocalAmplitudeDamping: return run_moments_local_ad(run, t, L, n, profile);
        case NoiseModel::GeneralizedAmplitudeDamping: return run_moments_gad(run, t, L, n, profile);
        case NoiseModel::GlobalDepolarizing: return run_moments_global_depol(run, t, L, n, profile);
        case NoiseModel::QutritDepolarizing: return run_moments_qutrit_depol(run, t, L, n, profile, phase);
    }
    throw DomainError("run_moments: unknown model");
}

/// Run averages (overlines) of the per-run moments.
struct MomentAggregate {
    double mean_a = 0;
    double mean_u = 0;
    double mean_v = 0;
    double meansq_a = 0;  // mean of a^2
    double meansq_b = 0;  // mean of (2u - a)^2
    double mean_error_weight = 0;
    int64_t n_runs = 0;

    double mean_b() const { return 2 * mean_u - mean_a; }
};

inline MomentAggregate aggregate(std::span<const RunMoments> runs) {
    MomentAggregate g;
    for (const auto &m : runs) {
        g.mean_a += m.a;
        g.mean_u += m.u;
        g.mean_v += m.v;
        g.meansq_a += m.a * m.a;
        g.meansq_b += m.b() * m.b();
        g.mean_error_weight += m.error_weight;
    }
    g.n_runs = static_cast<int64_t>(runs.size());
    if (g.n_runs > 0) {
        double inv = 1.0 / static_cast<double>(g.n_runs);
        g.mean_a *= inv;
        g.mean_u *= inv;
        g.mean_v *= inv;
        g.meansq_a *= inv;
        g.meansq_b *= inv;
        g.mean_error_weight *= inv;
    }
    return g;
}

inline MomentAggregate aggregate(const RunMoments &single) {
    return aggregate(std::span<const RunMoments>(&single, 1));
}

/// Moments of every run of `schedule` at interaction time t, aggregated.
inline MomentAggregate aggregate_schedule(NoiseModel model, std::span<const RunParams> schedule, double t,
                                          int64_t L, int n, DecayProfile profile,
                                          QutritPhase phase = QutritPhase::PerSiteT) {
    std::vector<RunMoments> runs;
    runs.reserve(schedule.size());
    for (const auto &r : schedule) runs.push_back(run_moments(model, r, t, L, n, profile, phase));
    return aggregate(runs);
}

/// p = x + y*omega for the mitigated probability <P_y>_mit.
struct AffineProbability {
    double x = 0.5;
    double y = 0;
};

inline AffineProbability mitigated_affine(const MomentAggregate &agg) {
    if (!(agg.mean_a > 0)) throw DegeneracyError("mitigated_affine: mean Tr[rho^n] is not positive");
    return {agg.mean_u / agg.mean_a, agg.mean_v / agg.mean_a};
}

/// |x - x_e| for general incoherent noise, where E = mean(eps^n)/mean((1-eps)^n)
/// for the true and estimated noise, and norm_n = ||p||_n.
inline double incoherent_bias(double E, double E_e, double p_perp, double norm_n, int n) {
    if (!(E >= 0 && E_e >= 0)) throw DomainError("incoherent_bias: E and E_e must be non-negative");
    if (!(p_perp >= 0 && p_perp <= norm_n)) throw DomainError("incoherent_bias: need 0 <= p_perp <= norm_n");
    if (norm_n == 0) return 0.0;
    double nd = n;
    double norm_pow = pow_nonneg(norm_n, nd);
    double ratio = pow_nonneg(p_perp / norm_n, nd);
    return norm_pow * std::abs(E_e - E) * (1 - ratio) / (2 * (1 + E * norm_pow) * (1 + E_e * norm_pow));
}

/// Renyi entropy of the error states from mean(eps^n) and ||p||_n.
inline double renyi_error_entropy(double eps_nth_moment, double p_norm_n, int n) {
    if (n == 1) throw DomainError("renyi_error_entropy: n = 1 is singular");
    if (n < 2) throw DomainError("renyi_error_entropy: n must be >= 2");
    if (!(eps_nth_moment > 0 && p_norm_n > 0)) throw DomainError("renyi_error_entropy: arguments must be positive");
    double nd = n;
    return (std::log(eps_nth_moment) + nd * std::log(p_norm_n)) / (1 - nd);
}

/// Same entropy from the already-combined weight mean(eps^n) ||p||_n^n.
inline double renyi_from_weight(double weight, int n) {
    if (n < 2 || !(weight > 0)) return std::numeric_limits<double>::quiet_NaN();
    return std::log(weight) / (1 - static_cast<double>(n));
}

}  // namespace vpm
