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

// vpmetro: sweeps, scaling fits and self-checks for purified GHZ metrology.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical degeneracy,
// 4 self-check failure (oracle-check, mc-check).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "vpm/checks.hpp"
#include "vpm/harness.hpp"

using namespace vpm;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitCheckFailed = 4;

struct Common {
    std::string config;
    std::optional<uint64_t> seed;
    std::string out;
    int threads = 1;
    std::string format = "csv";
};

void add_common(CLI::App *cmd, Common &c, bool with_config = true) {
    if (with_config) cmd->add_option("--config", c.config, "experiment config (JSON)")->check(CLI::ExistingFile);
    cmd->add_option("--seed", c.seed, "override the config seed");
    cmd->add_option("--out", c.out, "output file (default: stdout)");
    cmd->add_option("--threads", c.threads, "worker threads")->check(CLI::Range(1, 1024));
    cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv"}));
}

ExperimentConfig load(const Common &c) {
    ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
    if (c.seed) cfg.seed = *c.seed;
    return cfg;
}

/// stdout unless --out is given.
class Output {
  public:
    explicit Output(const std::string &path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw ConfigError("cannot open output file '" + path + "'");
        }
    }
    std::ostream &stream() { return file_ ? *file_ : std::cout; }

  private:
    std::unique_ptr<std::ofstream> file_;
};

SweepResult read_sweep(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open sweep CSV '" + path + "'");
    return read_csv(in);
}

// Rows split by (model, profile) so fits never mix curves.
std::map<std::pair<std::string, std::string>, SweepResult> by_curve(const SweepResult &res) {
    std::map<std::pair<std::string, std::string>, SweepResult> out;
    for (const auto &r : res.rows)
        out[{std::string(to_string(r.model)), std::string(to_string(r.profile))}].rows.push_back(r);
    return out;
}

SweepColumn parse_column(const std::string &s) {
    if (s == "delta2_omega") return SweepColumn::Delta2Omega;
    if (s == "bias") return SweepColumn::AbsBias;
    if (s == "renyi_H_n") return SweepColumn::Renyi;
    if (s == "t_opt") return SweepColumn::TOpt;
    if (s == "var_stat") return SweepColumn::VarStat;
    throw ConfigError("unknown column '" + s + "'");
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Error-mitigated GHZ metrology under drifting noise"};
    app.require_subcommand(1);

    Common sweep_opt;
    auto *sweep = app.add_subcommand("sweep", "run a config over its (L, n) grid and write CSV");
    add_common(sweep, sweep_opt);

    Common fit_opt;
    std::string fit_input, fit_column = "delta2_omega";
    int64_t fit_lo = 0, fit_hi = 0;
    auto *fit = app.add_subcommand("fit", "fit ln(column) against ln L per curve and n");
    add_common(fit, fit_opt, false);
    fit->add_option("input", fit_input, "sweep CSV")->required()->check(CLI::ExistingFile);
    fit->add_option("--column", fit_column, "delta2_omega, bias, renyi_H_n, t_opt or var_stat");
    fit->add_option("--L-min", fit_lo, "window lower bound (default: upper half of the grid)");
    fit->add_option("--L-max", fit_hi, "window upper bound");

    Common cross_opt;
    std::string cross_input;
    bool cross_baseline = false;
    auto *cross = app.add_subcommand("crossover", "crossings between n-curves (or against the separable baseline)");
    add_common(cross, cross_opt);
    cross->add_option("--input", cross_input, "sweep CSV (otherwise the config is swept)")->check(CLI::ExistingFile);
    cross->add_flag("--baseline", cross_baseline, "compare each n-curve with unentangled probes instead");

    Common opt_opt;
    auto *opt = app.add_subcommand("optimal-time", "pseudo-optimal interaction time per (L, n)");
    add_common(opt, opt_opt);

    Common oracle_opt;
    int oracle_draws = 50;
    auto *oracle = app.add_subcommand("oracle-check", "closed forms against the dense density-matrix oracle");
    add_common(oracle, oracle_opt, false);
    oracle->add_option("--draws", oracle_draws, "random parameter draws")->check(CLI::PositiveNumber);

    Common mc_opt;
    int64_t mc_L = 64, mc_reps = 2000;
    int mc_n = 2;
    auto *mc = app.add_subcommand("mc-check", "shot-level Monte Carlo against the variance formula");
    add_common(mc, mc_opt);
    mc->add_option("--L", mc_L, "register size")->check(CLI::PositiveNumber);
    mc->add_option("--n", mc_n, "copies")->check(CLI::PositiveNumber);
    mc->add_option("--repetitions", mc_reps, "Monte Carlo repetitions")->check(CLI::Range(int64_t{2}, int64_t{1} << 40));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (*sweep) {
            auto cfg = load(sweep_opt);
            auto res = run_sweep(cfg, sweep_opt.threads);
            Output out(sweep_opt.out);
            write_csv(out.stream(), res);
            return 0;
        }
        if (*fit) {
            auto res = read_sweep(fit_input);
            auto column = parse_column(fit_column);
            Output out(fit_opt.out);
            auto &os = out.stream();
            os << "model,profile,n,column,L_min,L_max,points,slope,stderr_slope,intercept\n";
            for (const auto &[key, curve] : by_curve(res)) {
                std::vector<int> ns;
                for (const auto &r : curve.rows)
                    if (std::find(ns.begin(), ns.end(), r.n) == ns.end()) ns.push_back(r.n);
                std::sort(ns.begin(), ns.end());
                for (int n : ns) {
                    LWindow w = upper_half_window(curve, n);
                    if (fit_lo > 0) w.lo = fit_lo;
                    if (fit_hi > 0) w.hi = fit_hi;
                    try {
                        auto f = fit_scaling(curve, {n, column}, w);
                        os << key.first << ',' << key.second << ',' << n << ',' << fit_column << ',' << w.lo << ','
                           << w.hi << ',' << f.points << ',' << format_double(f.slope) << ','
                           << format_double(f.stderr_slope) << ',' << format_double(f.intercept) << '\n';
                    } catch (const FitError &e) {
                        std::cerr << "vpmetro: " << key.first << '/' << key.second << " n=" << n << ": " << e.what()
                                  << '\n';
                    }
                }
            }
            return 0;
        }
        if (*cross) {
            Output out(cross_opt.out);
            auto &os = out.stream();
            if (cross_baseline) {
                auto cfg = load(cross_opt);
                auto res = run_sweep(cfg, cross_opt.threads);
                auto base = run_separable_baseline(cfg);
                os << "model,profile,n,L_star\n";
                for (int n : cfg.n_list) {
                    std::vector<double> xs, yg, ys;
                    for (const auto &r : res.select(n)) {
                        auto it = std::find_if(base.begin(), base.end(), [&](const auto &b) { return b.L == r.L; });
                        xs.push_back(static_cast<double>(r.L));
                        yg.push_back(r.delta2_omega);
                        ys.push_back(it->budget.delta2_omega);
                    }
                    for (double L : find_crossings(xs, yg, ys))
                        os << to_string(cfg.model) << ',' << to_string(cfg.profile) << ',' << n << ','
                           << format_double(L) << '\n';
                }
                return 0;
            }
            SweepResult res = cross_input.empty() ? run_sweep(load(cross_opt), cross_opt.threads) : read_sweep(cross_input);
            os << "model,profile,n_a,n_b,L_star\n";
            for (const auto &[key, curve] : by_curve(res))
                for (const auto &x : find_crossovers(curve))
                    os << key.first << ',' << key.second << ',' << x.n_a << ',' << x.n_b << ','
                       << format_double(x.L_star) << '\n';
            return 0;
        }
        if (*opt) {
            auto cfg = load(opt_opt);
            cfg.validate();
            auto est = cfg.estimated();
            auto search = search_config(cfg);
            Output out(opt_opt.out);
            auto &os = out.stream();
            os << "model,profile,L,n,t_opt,delta2_e,at_boundary\n";
            for (auto L : cfg.L_list) {
                for (int n : cfg.n_list) {
                    auto r = optimal_time(est, L, n, search);
                    os << to_string(cfg.model) << ',' << to_string(cfg.profile) << ',' << L << ',' << n << ','
                       << format_double(r.t_opt) << ',' << format_double(r.delta2_e) << ','
                       << (r.at_boundary ? "true" : "false") << '\n';
                }
            }
            return 0;
        }
        if (*oracle) {
            auto rep = oracle_check(oracle_draws, oracle_opt.seed.value_or(2024));
            Output out(oracle_opt.out);
            out.stream() << "cases,max_rel_a,max_rel_u,max_abs_v,passed\n"
                         << rep.cases << ',' << format_double(rep.max_rel_a) << ',' << format_double(rep.max_rel_u)
                         << ',' << format_double(rep.max_abs_v) << ',' << (rep.passed() ? "true" : "false") << '\n';
            return rep.passed() ? 0 : kExitCheckFailed;
        }
        if (*mc) {
            auto cfg = load(mc_opt);
            auto rep = mc_check(cfg, mc_L, mc_n, mc_reps);
            Output out(mc_opt.out);
            out.stream() << "L,n,t,shots,predicted,empirical,relative_error,bootstrap_se,resampled,passed\n"
                         << mc_L << ',' << mc_n << ',' << format_double(rep.t) << ',' << rep.shots << ','
                         << format_double(rep.predicted) << ',' << format_double(rep.empirical) << ','
                         << format_double(rep.relative_error()) << ',' << format_double(rep.bootstrap_se) << ','
                         << rep.resampled << ',' << (rep.passed() ? "true" : "false") << '\n';
            return rep.passed() ? 0 : kExitCheckFailed;
        }
    } catch (const ConfigError &e) {
        std::cerr << "vpmetro: configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DegeneracyError &e) {
        std::cerr << "vpmetro: numerical degeneracy: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const DomainError &e) {
        std::cerr << "vpmetro: invalid parameter: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ResourceError &e) {
        std::cerr << "vpmetro: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
