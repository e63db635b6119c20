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
#include <span>
#include <string>
#include <string_view>

#include "vpm/closedform.hpp"
#include "vpm/errors.hpp"
#include "vpm/noise.hpp"

namespace vpm {

/// Delta-method variance of z = f/g around (f0, g0).
inline double variance_ratio(double f0, double g0, double var_f, double var_g, double cov_fg) {
    if (g0 == 0) throw DegeneracyError("variance_ratio: g0 == 0");
    double g2 = g0 * g0;
    return var_f / g2 + f0 * f0 * var_g / (g2 * g2) - 2 * f0 * cov_fg / (g2 * g0);
}

namespace detail {

inline void check_variance_inputs(const MomentAggregate &agg, double n_eff) {
    if (!(n_eff > 0)) throw DomainError("variance: n_eff must be positive");
    if (!(agg.mean_a > 0)) throw DegeneracyError("variance: mean Tr[rho^n] is not positive");
}

}  // namespace detail

/// Var[<O>_mit] for a unitary observable O from run averages of Tr[rho^n O]
/// and Tr[rho^n]. Numerator and denominator circuits are independent.
inline double variance_mitigated_O(double mean_o, double meansq_o, double mean_a, double meansq_a, double n_eff) {
    if (!(n_eff > 0)) throw DomainError("variance: n_eff must be positive");
    if (!(mean_a > 0)) throw DegeneracyError("variance: mean Tr[rho^n] is not positive");
    double a2 = mean_a * mean_a;
    double spread_o = std::max(1 - meansq_o, 0.0);
    double spread_a = std::max(1 - meansq_a, 0.0);
    return spread_o / (n_eff * a2) + mean_o * mean_o * spread_a / (n_eff * a2 * a2);
}

/// Var[<Y>_mit] with Y = 2 P_y - I.
inline double variance_mitigated_O(const MomentAggregate &agg, double n_eff) {
    detail::check_variance_inputs(agg, n_eff);
    return variance_mitigated_O(agg.mean_b(), agg.meansq_b, agg.mean_a, agg.meansq_a, n_eff);
}

/// Var[<P_y>_mit] where <P_y>_mit = (p_denom + p_num - 1)/(2 p_denom - 1).
/// The cross term uses E[df dg] = 2 Var[p_denom].
inline double variance_mitigated_Py(const MomentAggregate &agg, double n_eff) {
    detail::check_variance_inputs(agg, n_eff);
    double A = agg.mean_a;
    double B = agg.mean_b();
    double sum = A + B;
    double spread_a = std::max(1 - agg.meansq_a, 0.0);
    double spread_b = std::max(1 - agg.meansq_b, 0.0);
    double A2 = A * A;
    double first = (spread_a + spread_b) / (4 * A2 * n_eff);
    double second = sum * sum * spread_a / (4 * A2 * A2 * n_eff);
    double cross = sum * spread_a / (2 * A2 * A * n_eff);
    // The three terms sum to a manifestly non-negative quantity; clip roundoff.
    return std::max(first + second - cross, 0.0);
}

struct UncertaintyBudget {
    double x = 0.5;
    double x_e = 0.5;
    double y_e = 0;
    double var_stat = 0;
    double sys_sq = 0;
    double delta2_omega = 0;
    double n_eff = 0;
    double t_used = 0;
};

/// delta^2 omega = (Var[p] + (x - x_e)^2) / y_e^2.
inline UncertaintyBudget delta2_omega(double x, double x_e, double y_e, double var_stat) {
    if (y_e == 0 || !std::isfinite(y_e)) throw NoSignalError("delta2_omega: y_e == 0, no signal");
    if (!(var_stat >= 0)) throw DomainError("delta2_omega: var_stat must be non-negative");
    UncertaintyBudget b;
    b.x = x;
    b.x_e = x_e;
    b.y_e = y_e;
    b.var_stat = var_stat;
    double d = x - x_e;
    b.sys_sq = d * d;
    b.delta2_omega = (b.var_stat + b.sys_sq) / (y_e * y_e);
    return b;
}

/// Mitigation shots affordable in total time T_total: (T_total/t)/(2n),
/// times L for the separable qutrit register. Not rounded.
inline double effective_samples(double T_total, double t, int n, int64_t L, NoiseModel model) {
    if (!(t > 0)) throw ConfigError("effective_samples: t must be positive");
    if (t > T_total) throw ConfigError("effective_samples: t exceeds the total experimental time");
    if (n < 1) throw DomainError("effective_samples: n must be >= 1");
    double n_samp = T_total / t;
    double n_eff = n_samp / (2.0 * n);
    if (model == NoiseModel::QutritDepolarizing) n_eff *= static_cast<double>(L);
    return n_eff;
}

/// Which slope the separable reference divides by.
enum class BaselineSlope {
    Calibrated,    // sqrt(1-eps_e) t/2 at the estimated T1, as for the GHZ rows
    ScheduleMean,  // run average of sqrt(1-eps_i) t/2 under the true schedule
};

inline std::string_view to_string(BaselineSlope b) {
    return b == BaselineSlope::Calibrated ? "calibrated" : "schedule_mean";
}

inline BaselineSlope parse_baseline_slope(std::string_view s) {
    if (s == "calibrated") return BaselineSlope::Calibrated;
    if (s == "schedule_mean") return BaselineSlope::ScheduleMean;
    throw ConfigError("unknown baseline slope '" + std::string(s) + "'");
}

/// Unmitigated L separable |+> qubits under the same amplitude-damping
/// schedule. Every run gives x = 1/2 (no systematic error); L*T_total/t shots.
inline UncertaintyBudget separable_baseline(std::span<const RunParams> schedule, double t, int64_t L,
                                            DecayProfile profile, double T_total, double t1_estimate,
                                            BaselineSlope slope = BaselineSlope::Calibrated) {
    if (schedule.empty()) throw ConfigError("separable_baseline: empty schedule");
    if (!(t > 0) || t > T_total) throw ConfigError("separable_baseline: need 0 < t <= T_total");
    if (L < 1) throw DomainError("separable_baseline: L must be >= 1");
    double mean_root = 0;
    for (const auto &r : schedule) mean_root += std::sqrt(1 - error_rate(t, r.t1, profile));
    mean_root /= static_cast<double>(schedule.size());
    double root = slope == BaselineSlope::Calibrated ? std::sqrt(1 - error_rate(t, t1_estimate, profile)) : mean_root;
    const double x = 0.5;  // <sigma_y> = 0 at omega = 0 whatever the damping
    double n_eff = static_cast<double>(L) * T_total / t;
    auto b = delta2_omega(x, 0.5, root * t / 2, x * (1 - x) / n_eff);
    b.n_eff = n_eff;
    b.t_used = t;
    return b;
}

}  // namespace vpm
