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
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "vpm/closedform.hpp"
#include "vpm/errors.hpp"
#include "vpm/estimator.hpp"
#include "vpm/noise.hpp"
#include "vpm/optimizer.hpp"
#include "vpm/rng.hpp"

namespace vpm {

inline std::vector<int64_t> powers_of_two(int64_t lo, int64_t hi) {
    std::vector<int64_t> out;
    for (int64_t L = lo; L <= hi; L *= 2) out.push_back(L);
    return out;
}

/// One sweep over (L, n). Defaults: local amplitude damping, T1 drifting
/// 1.0 -> 0.5 with +-0.25 jitter, T1e = 1.0, T_total = 100.
struct ExperimentConfig {
    NoiseModel model = NoiseModel::LocalAmplitudeDamping;
    DecayProfile profile = DecayProfile::Markovian;
    std::vector<int64_t> L_list = powers_of_two(4, 512);
    std::vector<int> n_list = {1, 2, 3};
    double T_total = 100;

    // True noise. `drift` is the T1 schedule; GAD drifts beta and gamma instead.
    DriftSpec drift = {1.0, 0.5, 0.25, 0};
    DriftSpec drift_beta = {2.0, 1.0, 0.5, 0};
    DriftSpec drift_gamma = {1.0, 2.0, 0.5, 0};

    // Experimenter's constant estimate.
    double estimated_t1 = 1.0;
    double estimated_beta = 2.0;
    double estimated_gamma = 1.0;

    uint64_t seed = 0;
    std::optional<TimeSearchConfig> search;  // unset: bracket derived from the estimate
    QutritPhase qutrit_y_factor = QutritPhase::PerSiteT;
    bool shared_schedule = false;  // reuse one fluctuation realization across n
    BaselineSlope baseline_slope = BaselineSlope::Calibrated;

    /// Drift disabled and estimate exact: the unbiased reference curves.
    static ExperimentConfig ideal(NoiseModel model, DecayProfile profile) {
        ExperimentConfig c;
        c.model = model;
        c.profile = profile;
        c.drift = DriftSpec::constant(c.estimated_t1);
        c.drift_beta = DriftSpec::constant(c.estimated_beta);
        c.drift_gamma = DriftSpec::constant(c.estimated_gamma);
        return c;
    }

    EstimatedModel estimated() const {
        EstimatedModel e;
        e.model = model;
        e.profile = profile;
        e.T_total = T_total;
        e.qutrit_phase = qutrit_y_factor;
        if (model == NoiseModel::GeneralizedAmplitudeDamping) {
            e.params = gad_run(0, estimated_beta, estimated_gamma);
        } else {
            e.params.t1 = estimated_t1;
        }
        return e;
    }

    void validate() const {
        if (L_list.empty() || n_list.empty()) throw ConfigError("L_list and n_list must be nonempty");
        for (auto L : L_list)
            if (L < 1) throw ConfigError("L_list entries must be >= 1");
        for (auto n : n_list)
            if (n < 1) throw ConfigError("n_list entries must be >= 1");
        if (!(T_total > 0)) throw ConfigError("T_total must be positive");
        if (!(estimated_t1 > 0)) throw ConfigError("estimated t1 must be positive");
        if (!(estimated_beta > 0 && estimated_gamma > 0)) throw ConfigError("estimated beta/gamma must be positive");
    }
};

// ---------------------------------------------------------------------------
// Config document (JSON), field names mirror ExperimentConfig.

namespace detail {

inline DriftSpec drift_from_json(const nlohmann::json &j, DriftSpec d) {
    d.start = j.value("start", d.start);
    d.end = j.value("end", d.end);
    d.fluct_halfwidth = j.value("fluct_halfwidth", d.fluct_halfwidth);
    return d;
}

inline nlohmann::json drift_to_json(const DriftSpec &d) {
    return {{"start", d.start}, {"end", d.end}, {"fluct_halfwidth", d.fluct_halfwidth}};
}

}  // namespace detail

inline ExperimentConfig config_from_json(const nlohmann::json &j) {
    ExperimentConfig c;
    try {
        if (!j.is_object()) throw ConfigError("config must be an object");
        static const char *known[] = {"model", "profile", "L_list", "n_list", "T_total", "drift", "estimated",
                                      "seed", "search", "qutrit_y_factor", "shared_schedule",
                                      "baseline_slope"};
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (std::find_if(std::begin(known), std::end(known), [&](const char *k) { return it.key() == k; }) ==
                std::end(known)) {
                throw ConfigError("unknown config key '" + it.key() + "'");
            }
        }
        if (j.contains("model")) c.model = parse_noise_model(j.at("model").get<std::string>());
        if (j.contains("profile")) c.profile = parse_decay_profile(j.at("profile").get<std::string>());
        if (j.contains("L_list")) c.L_list = j.at("L_list").get<std::vector<int64_t>>();
        if (j.contains("n_list")) c.n_list = j.at("n_list").get<std::vector<int>>();
        c.T_total = j.value("T_total", c.T_total);
        if (j.contains("drift")) {
            const auto &d = j.at("drift");
            if (d.contains("beta") || d.contains("gamma")) {
                if (d.contains("beta")) c.drift_beta = detail::drift_from_json(d.at("beta"), c.drift_beta);
                if (d.contains("gamma")) c.drift_gamma = detail::drift_from_json(d.at("gamma"), c.drift_gamma);
            } else {
                c.drift = detail::drift_from_json(d, c.drift);
            }
        }
        if (j.contains("estimated")) {
            const auto &e = j.at("estimated");
            c.estimated_t1 = e.value("t1", c.estimated_t1);
            c.estimated_beta = e.value("beta", c.estimated_beta);
            c.estimated_gamma = e.value("gamma", c.estimated_gamma);
        }
        c.seed = j.value("seed", c.seed);
        if (j.contains("search")) {
            const auto &s = j.at("search");
            TimeSearchConfig cfg = default_search(c.estimated());
            cfg.t_min = s.value("t_min", cfg.t_min);
            cfg.t_max = s.value("t_max", cfg.t_max);
            cfg.coarse_points = s.value("coarse_points", cfg.coarse_points);
            cfg.refine_tol = s.value("refine_tol", cfg.refine_tol);
            c.search = cfg;
        }
        if (j.contains("qutrit_y_factor")) c.qutrit_y_factor = parse_qutrit_phase(j.at("qutrit_y_factor").get<std::string>());
        c.shared_schedule = j.value("shared_schedule", c.shared_schedule);
        if (j.contains("baseline_slope")) c.baseline_slope = parse_baseline_slope(j.at("baseline_slope").get<std::string>());
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

inline nlohmann::json config_to_json(const ExperimentConfig &c) {
    nlohmann::json j;
    j["model"] = std::string(to_string(c.model));
    j["profile"] = std::string(to_string(c.profile));
    j["L_list"] = c.L_list;
    j["n_list"] = c.n_list;
    j["T_total"] = c.T_total;
    if (c.model == NoiseModel::GeneralizedAmplitudeDamping) {
        j["drift"] = {{"beta", detail::drift_to_json(c.drift_beta)}, {"gamma", detail::drift_to_json(c.drift_gamma)}};
        j["estimated"] = {{"beta", c.estimated_beta}, {"gamma", c.estimated_gamma}};
    } else {
        j["drift"] = detail::drift_to_json(c.drift);
        j["estimated"] = {{"t1", c.estimated_t1}};
    }
    j["seed"] = c.seed;
    if (c.search) {
        j["search"] = {{"t_min", c.search->t_min},
                       {"t_max", c.search->t_max},
                       {"coarse_points", c.search->coarse_points},
                       {"refine_tol", c.search->refine_tol}};
    }
    j["qutrit_y_factor"] = std::string(to_string(c.qutrit_y_factor));
    j["shared_schedule"] = c.shared_schedule;
    j["baseline_slope"] = std::string(to_string(c.baseline_slope));
    return j;
}

inline ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
    return config_from_json(j);
}

// ---------------------------------------------------------------------------
// Sweep.

struct SweepRow {
    NoiseModel model = NoiseModel::LocalAmplitudeDamping;
    DecayProfile profile = DecayProfile::Markovian;
    int64_t L = 0;
    int n = 0;
    double t_opt = 0;
    double x = 0;
    double x_e = 0;
    double y_e = 0;
    double var_stat = 0;
    double sys_sq = 0;
    double delta2_omega = 0;
    double n_eff = 0;
    double renyi_H_n = 0;
    std::string status = "ok";  // "ok", "boundary", "no_signal", "degenerate"

    bool ok() const { return status == "ok" || status == "boundary"; }
};

struct SweepResult {
    std::vector<SweepRow> rows;

    /// Rows for one n (and optionally one model/profile), sorted by L.
    std::vector<SweepRow> select(int n) const {
        std::vector<SweepRow> out;
        for (const auto &r : rows)
            if (r.n == n && r.ok()) out.push_back(r);
        std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) { return a.L < b.L; });
        return out;
    }
};

/// Schedule of true per-run noise parameters for one sweep cell.
inline std::vector<RunParams> cell_schedule(const ExperimentConfig &cfg, int64_t L, int n, int64_t n_runs) {
    uint64_t cell = derive_seed(cfg.seed, static_cast<uint64_t>(cfg.model), static_cast<uint64_t>(L),
                                cfg.shared_schedule ? 0 : static_cast<uint64_t>(n));
    if (cfg.model == NoiseModel::GeneralizedAmplitudeDamping) {
        DriftSpec b = cfg.drift_beta, g = cfg.drift_gamma;
        b.seed = derive_seed(cell, 1);
        g.seed = derive_seed(cell, 2);
        return gad_drift_schedule(b, g, n_runs);
    }
    DriftSpec d = cfg.drift;
    d.seed = derive_seed(cell, 0);
    return drift_schedule(d, n_runs);
}

inline TimeSearchConfig search_config(const ExperimentConfig &cfg) {
    return cfg.search ? *cfg.search : default_search(cfg.estimated());
}

/// One (L, n) cell: pseudo-optimal time from the estimated model, then the
/// true drifting schedule at that time, then the uncertainty budget.
inline SweepRow run_cell(const ExperimentConfig &cfg, int64_t L, int n) {
    SweepRow row;
    row.model = cfg.model;
    row.profile = cfg.profile;
    row.L = L;
    row.n = n;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    try {
        auto est = cfg.estimated();
        auto opt = optimal_time(est, L, n, search_config(cfg));
        double t = opt.t_opt;
        row.t_opt = t;
        auto n_runs = std::max<int64_t>(1, static_cast<int64_t>(std::floor(cfg.T_total / t)));
        auto schedule = cell_schedule(cfg, L, n, n_runs);
        auto agg = aggregate_schedule(cfg.model, schedule, t, L, n, cfg.profile, cfg.qutrit_y_factor);
        auto truth = mitigated_affine(agg);
        auto est_agg = aggregate(run_moments(cfg.model, est.params, t, L, n, cfg.profile, cfg.qutrit_y_factor));
        auto guess = mitigated_affine(est_agg);
        double n_eff = effective_samples(cfg.T_total, t, n, L, cfg.model);
        auto budget = delta2_omega(truth.x, guess.x, guess.y, variance_mitigated_Py(agg, n_eff));
        row.x = budget.x;
        row.x_e = budget.x_e;
        row.y_e = budget.y_e;
        row.var_stat = budget.var_stat;
        row.sys_sq = budget.sys_sq;
        row.delta2_omega = budget.delta2_omega;
        row.n_eff = n_eff;
        row.renyi_H_n = renyi_from_weight(agg.mean_error_weight, n);
        if (opt.at_boundary) row.status = "boundary";
    } catch (const NoSignalError &) {
        row.status = "no_signal";
    } catch (const DegeneracyError &) {
        row.status = "degenerate";
    }
    if (!row.ok()) {
        row.x = row.x_e = row.y_e = row.var_stat = row.sys_sq = row.delta2_omega = row.n_eff = row.renyi_H_n = nan;
    }
    return row;
}

/// Runs `fn(i)` for i in [0, count) on up to `threads` workers.
inline void parallel_for(size_t count, int threads, const std::function<void(size_t)> &fn) {
    if (threads <= 1 || count <= 1) {
        for (size_t i = 0; i < count; i++) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::jthread> pool;
    auto workers = std::min<size_t>(static_cast<size_t>(threads), count);
    for (size_t w = 0; w < workers; w++) {
        pool.emplace_back([&] {
            for (size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    for (auto &e : errors)
        if (e) std::rethrow_exception(e);
}

/// Rows come out ordered by (L, n) regardless of thread count.
inline SweepResult run_sweep(const ExperimentConfig &cfg, int threads = 1) {
    cfg.validate();
    auto Ls = cfg.L_list;
    auto ns = cfg.n_list;
    std::sort(Ls.begin(), Ls.end());
    std::sort(ns.begin(), ns.end());
    SweepResult res;
    res.rows.resize(Ls.size() * ns.size());
    parallel_for(res.rows.size(), threads, [&](size_t i) {
        res.rows[i] = run_cell(cfg, Ls[i / ns.size()], ns[i % ns.size()]);
    });
    return res;
}

struct BaselinePoint {
    int64_t L = 0;
    UncertaintyBudget budget;
};

/// Separable-probe reference curve (L unmitigated |+> qubits under the same
/// amplitude-damping drift). The interaction time is optimized for the
/// estimated constant T1, as for the entangled probes.
inline std::vector<BaselinePoint> run_separable_baseline(const ExperimentConfig &cfg) {
    cfg.validate();
    std::vector<BaselinePoint> out;
    RunParams est;
    est.t1 = cfg.estimated_t1;
    auto search = search_config(cfg);
    for (auto L : cfg.L_list) {
        auto opt = minimize_time(
            [&](double t) {
                try {
                    return separable_baseline(std::span<const RunParams>(&est, 1), t, L, cfg.profile, cfg.T_total,
                                              cfg.estimated_t1, cfg.baseline_slope)
                        .delta2_omega;
                } catch (const NoSignalError &) {
                    return std::numeric_limits<double>::infinity();
                }
            },
            search);
        auto n_runs = std::max<int64_t>(1, static_cast<int64_t>(std::floor(cfg.T_total / opt.t_opt)));
        DriftSpec d = cfg.drift;
        d.seed = derive_seed(cfg.seed, 0xBA5E, static_cast<uint64_t>(L));
        auto schedule = drift_schedule(d, n_runs);
        out.push_back({L, separable_baseline(schedule, opt.t_opt, L, cfg.profile, cfg.T_total, cfg.estimated_t1,
                                                  cfg.baseline_slope)});
    }
    std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) { return a.L < b.L; });
    return out;
}

// ---------------------------------------------------------------------------
// Scaling fits and crossovers.

struct PowerLawFit {
    double slope = 0;
    double intercept = 0;
    double stderr_slope = 0;
    size_t points = 0;
};

/// Ordinary least squares of ln y on ln x.
inline PowerLawFit fit_power_law(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw FitError("fit: size mismatch");
    std::vector<double> lx, ly;
    for (size_t i = 0; i < xs.size(); i++) {
        if (!(xs[i] > 0 && ys[i] > 0) || !std::isfinite(ys[i])) continue;
        lx.push_back(std::log(xs[i]));
        ly.push_back(std::log(ys[i]));
    }
    const size_t n = lx.size();
    if (n < 4) throw FitError("fit: need at least 4 positive points in the window");
    double mx = 0, my = 0;
    for (size_t i = 0; i < n; i++) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; i++) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0) throw FitError("fit: all abscissae equal");
    PowerLawFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double rss = 0;
    for (size_t i = 0; i < n; i++) {
        double r = ly[i] - f.intercept - f.slope * lx[i];
        rss += r * r;
    }
    f.stderr_slope = n > 2 ? std::sqrt(rss / static_cast<double>(n - 2) / sxx) : 0.0;
    f.points = n;
    return f;
}

enum class SweepColumn { Delta2Omega, AbsBias, Renyi, TOpt, VarStat };

struct SweepSelector {
    int n = 1;
    SweepColumn column = SweepColumn::Delta2Omega;
};

inline double column_value(const SweepRow &r, SweepColumn c) {
    switch (c) {
        case SweepColumn::Delta2Omega: return r.delta2_omega;
        case SweepColumn::AbsBias: return std::sqrt(r.sys_sq);
        case SweepColumn::Renyi: return r.renyi_H_n;
        case SweepColumn::TOpt: return r.t_opt;
        case SweepColumn::VarStat: return r.var_stat;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

/// Inclusive L window; an unset bound means "upper half of the grid".
struct LWindow {
    int64_t lo = 0;
    int64_t hi = std::numeric_limits<int64_t>::max();
};

inline LWindow upper_half_window(const SweepResult &res, int n) {
    auto rows = res.select(n);
    if (rows.empty()) return {};
    return {rows[rows.size() / 2].L, rows.back().L};
}

/// Slope of ln(column) versus ln L for rows with the selected n.
inline PowerLawFit fit_scaling(const SweepResult &res, const SweepSelector &sel, const LWindow &window) {
    std::vector<double> xs, ys;
    for (const auto &r : res.select(sel.n)) {
        if (r.L < window.lo || r.L > window.hi) continue;
        xs.push_back(static_cast<double>(r.L));
        ys.push_back(column_value(r, sel.column));
    }
    return fit_power_law(xs, ys);
}

inline PowerLawFit fit_scaling(const SweepResult &res, const SweepSelector &sel) {
    return fit_scaling(res, sel, upper_half_window(res, sel.n));
}

/// Interpolated abscissae (in ln x, ln y) where curve a crosses curve b.
inline std::vector<double> find_crossings(std::span<const double> xs, std::span<const double> ya,
                                          std::span<const double> yb) {
    std::vector<double> out;
    std::vector<double> lx, d;
    for (size_t i = 0; i < xs.size(); i++) {
        if (!(ya[i] > 0 && yb[i] > 0)) continue;
        lx.push_back(std::log(xs[i]));
        d.push_back(std::log(ya[i]) - std::log(yb[i]));
    }
    for (size_t i = 0; i + 1 < d.size(); i++) {
        if (d[i] == 0) {
            out.push_back(std::exp(lx[i]));
        } else if ((d[i] < 0) != (d[i + 1] < 0) && d[i + 1] != 0) {
            double f = d[i] / (d[i] - d[i + 1]);
            out.push_back(std::exp(lx[i] + f * (lx[i + 1] - lx[i])));
        }
    }
    if (!d.empty() && d.back() == 0) out.push_back(std::exp(lx.back()));
    return out;
}

struct Crossover {
    int n_a = 0;
    int n_b = 0;
    double L_star = 0;
};

/// Crossings of delta^2 omega between every pair of n-curves on their shared L grid.
inline std::vector<Crossover> find_crossovers(const SweepResult &res) {
    std::vector<int> ns;
    for (const auto &r : res.rows)
        if (std::find(ns.begin(), ns.end(), r.n) == ns.end()) ns.push_back(r.n);
    std::sort(ns.begin(), ns.end());
    std::vector<Crossover> out;
    for (size_t i = 0; i < ns.size(); i++) {
        for (size_t j = i + 1; j < ns.size(); j++) {
            auto a = res.select(ns[i]);
            auto b = res.select(ns[j]);
            std::vector<double> xs, ya, yb;
            for (const auto &ra : a) {
                auto it = std::find_if(b.begin(), b.end(), [&](const auto &rb) { return rb.L == ra.L; });
                if (it == b.end()) continue;
                xs.push_back(static_cast<double>(ra.L));
                ya.push_back(ra.delta2_omega);
                yb.push_back(it->delta2_omega);
            }
            for (double L : find_crossings(xs, ya, yb)) out.push_back({ns[i], ns[j], L});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSV: header + one row per cell, floats with 17 significant digits.

inline const char *csv_header() {
    return "model,profile,L,n,t_opt,x,x_e,y_e,var_stat,sys_sq,delta2_omega,n_eff,renyi_H_n,status";
}

inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

inline double parse_double(const std::string &s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw ConfigError("csv: bad number '" + s + "'");
    return v;
}

inline void write_csv(std::ostream &out, const SweepResult &res) {
    out << csv_header() << '\n';
    for (const auto &r : res.rows) {
        out << to_string(r.model) << ',' << to_string(r.profile) << ',' << r.L << ',' << r.n;
        for (double v : {r.t_opt, r.x, r.x_e, r.y_e, r.var_stat, r.sys_sq, r.delta2_omega, r.n_eff, r.renyi_H_n}) {
            out << ',' << format_double(v);
        }
        out << ',' << r.status << '\n';
    }
}

inline SweepResult read_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line) || line != csv_header()) throw ConfigError("csv: missing or unexpected header");
    SweepResult res;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 14) throw ConfigError("csv: expected 14 fields, got " + std::to_string(f.size()));
        SweepRow r;
        r.model = parse_noise_model(f[0]);
        r.profile = parse_decay_profile(f[1]);
        r.L = std::stoll(f[2]);
        r.n = std::stoi(f[3]);
        double *dst[] = {&r.t_opt, &r.x, &r.x_e, &r.y_e, &r.var_stat, &r.sys_sq, &r.delta2_omega, &r.n_eff,
                         &r.renyi_H_n};
        for (size_t k = 0; k < 9; k++) *dst[k] = parse_double(f[4 + k]);
        r.status = f[13];
        res.rows.push_back(std::move(r));
    }
    return res;
}

}  // namespace vpm
