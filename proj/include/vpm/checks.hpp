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
#include <vector>

#include "vpm/harness.hpp"
#include "vpm/oracle.hpp"

namespace vpm {

// Self-checks shared by the CLI and the acceptance run.

struct OracleCheckReport {
    int cases = 0;
    double max_rel_a = 0;
    double max_rel_u = 0;
    double max_abs_v = 0;

    bool passed(double tol_au = 1e-10, double tol_v = 1e-8) const {
        return max_rel_a <= tol_au && max_rel_u <= tol_au && max_abs_v <= tol_v;
    }
};

/// Closed-form moments against the dense oracle over seeded random draws of
/// (t, T1 or beta/gamma, L <= 6, n <= 3, profile), for all four models.
inline OracleCheckReport oracle_check(int draws, uint64_t seed) {
    OracleCheckReport rep;
    for (uint64_t i = 0; i < static_cast<uint64_t>(draws); i++) {
        double t = counter_uniform(seed, 0, i, 0.01, 1.0);
        double t1 = counter_uniform(seed, 1, i, 0.3, 2.0);
        double beta = counter_uniform(seed, 2, i, 0.3, 4.0);
        double gamma = counter_uniform(seed, 3, i, 0.3, 3.0);
        int64_t L = 1 + static_cast<int64_t>(counter_uniform(seed, 4, i) * 6);
        int n = 1 + static_cast<int>(counter_uniform(seed, 5, i) * 3);
        auto prof = i % 2 ? DecayProfile::Markovian : DecayProfile::TimeInhomogeneous;
        for (auto model : {NoiseModel::LocalAmplitudeDamping, NoiseModel::GeneralizedAmplitudeDamping,
                           NoiseModel::GlobalDepolarizing, NoiseModel::QutritDepolarizing}) {
            RunParams run;
            run.t1 = t1;
            if (model == NoiseModel::GeneralizedAmplitudeDamping) run = gad_run(0, beta, gamma);
            int64_t Lm = model == NoiseModel::QutritDepolarizing ? 1 : L;
            auto dense = oracle_moments(model, run, t, Lm, n, prof);
            auto cf = run_moments(model, run, t, Lm, n, prof);
            rep.max_rel_a = std::max(rep.max_rel_a, std::abs(cf.a / dense.a - 1));
            rep.max_rel_u = std::max(rep.max_rel_u, std::abs(cf.u / dense.u - 1));
            rep.max_abs_v = std::max(rep.max_abs_v, std::abs(cf.v - dense.v));
            rep.cases++;
        }
    }
    return rep;
}

struct McCheckReport {
    double t = 0;
    int64_t shots = 0;  // per circuit per repetition
    double predicted = 0;
    double empirical = 0;
    double bootstrap_se = 0;
    int64_t resampled = 0;

    double relative_error() const { return std::abs(empirical / predicted - 1); }
    double standard_errors() const { return std::abs(empirical - predicted) / bootstrap_se; }
    bool passed(double rel_tol = 0.1, double max_se = 3) const {
        return relative_error() <= rel_tol && standard_errors() <= max_se;
    }
};

/// Shot-level Monte Carlo of Var[<P_y>_mit] for one sweep cell at its
/// pseudo-optimal time. Each circuit gets n_eff shots; the true drift is
/// spread across them, one run per shot.
inline McCheckReport mc_check(const ExperimentConfig &cfg, int64_t L, int n, int64_t repetitions) {
    cfg.validate();
    McCheckReport rep;
    rep.t = optimal_time(cfg.estimated(), L, n, search_config(cfg)).t_opt;
    rep.shots = std::max<int64_t>(2, static_cast<int64_t>(std::floor(effective_samples(cfg.T_total, rep.t, n, L, cfg.model))));
    auto sched = cell_schedule(cfg, L, n, rep.shots);
    std::vector<RunMoments> runs;
    runs.reserve(sched.size());
    for (const auto &r : sched) runs.push_back(run_moments(cfg.model, r, rep.t, L, n, cfg.profile, cfg.qutrit_y_factor));
    rep.predicted = variance_mitigated_Py(aggregate(runs), static_cast<double>(rep.shots));
    auto mc = mc_shot_experiment(runs, repetitions, derive_seed(cfg.seed, 0x3C));
    rep.empirical = mc.var_py;
    rep.resampled = mc.resampled;
    rep.bootstrap_se = bootstrap_variance_se(mc.py_samples, 500, derive_seed(cfg.seed, 0xB0));
    return rep;
}

}  // namespace vpm
