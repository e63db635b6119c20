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
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "vpm/closedform.hpp"
#include "vpm/errors.hpp"
#include "vpm/estimator.hpp"
#include "vpm/noise.hpp"

namespace vpm {

struct TimeSearchConfig {
    double t_min = 1e-4;
    double t_max = 10.0;
    int coarse_points = 256;
    double refine_tol = 1e-7;  // relative, on t
};

struct TimeSearchResult {
    double t_opt = 0;
    double delta2_e = 0;
    bool at_boundary = false;  // minimum sits on the bracket edge; widen it
};

/// The experimenter's (constant, possibly wrong) noise model.
struct EstimatedModel {
    NoiseModel model = NoiseModel::LocalAmplitudeDamping;
    DecayProfile profile = DecayProfile::Markovian;
    RunParams params;
    double T_total = 100;
    QutritPhase qutrit_phase = QutritPhase::PerSiteT;
};

/// Default bracket [1e-4 T1e, min(10 T1e, T_total)].
inline TimeSearchConfig default_search(const EstimatedModel &est) {
    TimeSearchConfig cfg;
    cfg.t_min = 1e-4 * est.params.t1;
    cfg.t_max = std::min(10 * est.params.t1, est.T_total);
    return cfg;
}

/// Estimated uncertainty Var[p_e](t)/y_e(t)^2, with no systematic term.
/// Returns +inf where y_e is not positive or the variance has collapsed to
/// zero (fully decohered register, both quantities lost to roundoff).
inline double estimated_delta2(const EstimatedModel &est, int64_t L, int n, double t) {
    auto m = run_moments(est.model, est.params, t, L, n, est.profile, est.qutrit_phase);
    auto agg = aggregate(m);
    if (!(agg.mean_a > 0)) return std::numeric_limits<double>::infinity();
    auto p = mitigated_affine(agg);
    if (!(p.y > 0)) return std::numeric_limits<double>::infinity();
    double n_eff = effective_samples(est.T_total, t, n, L, est.model);
    double var = variance_mitigated_Py(agg, n_eff);
    if (!(var > 0)) return std::numeric_limits<double>::infinity();
    return var / (p.y * p.y);
}

/// Minimizes f over [cfg.t_min, cfg.t_max]: log-spaced coarse scan, then
/// golden-section refinement in ln t around the best grid point. Ties go to
/// the smaller t.
inline TimeSearchResult minimize_time(const std::function<double(double)> &f, const TimeSearchConfig &cfg) {
    if (!(cfg.t_min > 0 && cfg.t_min < cfg.t_max)) throw ConfigError("time search: need 0 < t_min < t_max");
    if (cfg.coarse_points < 32) throw ConfigError("time search: coarse_points must be >= 32");
    if (!(cfg.refine_tol > 0)) throw ConfigError("time search: refine_tol must be positive");

    const int m = cfg.coarse_points;
    const double lo = std::log(cfg.t_min), hi = std::log(cfg.t_max);
    std::vector<double> grid(m);
    int best = -1;
    double best_val = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; i++) {
        grid[i] = i == m - 1 ? hi : lo + (hi - lo) * i / (m - 1);
        double v = f(std::exp(grid[i]));
        if (std::isfinite(v) && v < best_val) {
            best_val = v;
            best = i;
        }
    }
    if (best < 0) throw NoSignalError("time search: no signal anywhere in the bracket");

    TimeSearchResult res;
    res.t_opt = std::exp(grid[best]);
    res.delta2_e = best_val;
    res.at_boundary = best == 0 || best == m - 1;
    if (res.at_boundary) return res;

    auto g = [&](double s) {
        double v = f(std::exp(s));
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };
    const double inv_phi = (std::sqrt(5.0) - 1) / 2;
    double a = grid[best - 1], b = grid[best + 1];
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = g(c), fd = g(d);
    while (b - a > cfg.refine_tol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = g(d);
        }
    }
    double s = fc <= fd ? c : d;
    double v = std::min(fc, fd);
    if (v < res.delta2_e) {
        res.t_opt = std::exp(s);
        res.delta2_e = v;
    }
    return res;
}

/// Pseudo-optimal interaction time for the estimated model.
inline TimeSearchResult optimal_time(const EstimatedModel &est, int64_t L, int n, const TimeSearchConfig &cfg) {
    if (!(cfg.t_max <= est.T_total)) throw ConfigError("time search: t_max exceeds T_total");
    return minimize_time([&](double t) { return estimated_delta2(est, L, n, t); }, cfg);
}

inline TimeSearchResult optimal_time(const EstimatedModel &est, int64_t L, int n) {
    return optimal_time(est, L, n, default_search(est));
}

}  // namespace vpm
