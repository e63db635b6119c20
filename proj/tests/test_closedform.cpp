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

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "vpm/closedform.hpp"
#include "vpm/optimizer.hpp"

namespace vpm {
namespace {

// Independent reference: sum_{k=lo}^{hi} C(L,k) f(k), with f given in log
// form, accumulated by log-sum-exp in long double.
template <class LogTerm>
long double direct_binomial_sum(int64_t L, int64_t lo, int64_t hi, LogTerm log_term) {
    std::vector<long double> logs;
    for (int64_t k = lo; k <= hi; k++) {
        long double lc = std::lgammal(L + 1.0L) - std::lgammal(k + 1.0L) - std::lgammal(L - k + 1.0L);
        long double lt = log_term(k);
        if (std::isfinite(static_cast<double>(lt))) logs.push_back(lc + lt);
    }
    if (logs.empty()) return 0;
    long double m = *std::max_element(logs.begin(), logs.end());
    long double s = 0;
    for (auto l : logs) s += std::exp(l - m);
    return std::exp(m) * s;
}

long double safe_log(long double x) { return x > 0 ? std::log(x) : -INFINITY; }

// Eigenvalues of the 2x2 block of 2*rho, by a dense solver.
std::pair<double, double> block_eigs(double a, double b, double c) {
    Eigen::Matrix2d m;
    m << a, b, b, c;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
    return {es.eigenvalues()(1), es.eigenvalues()(0)};
}

double rel(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

TEST(PowHelpers, EdgeCases) {
    EXPECT_EQ(pow_nonneg(0, 0), 1.0);
    EXPECT_EQ(pow_nonneg(0, 3), 0.0);
    EXPECT_NEAR(pow_nonneg(0.3, 4), 0.0081, 1e-17);
    EXPECT_EQ(pow_one_minus(1, 2), 0.0);
    EXPECT_EQ(pow_one_minus(0.5, 0), 1.0);
    EXPECT_NEAR(pow_one_minus(1e-18, 1e6), std::exp(-1e-12), 1e-16);
}

TEST(BinomialInterior, MatchesDirectSum) {
    for (int64_t L : {2, 3, 5, 10, 37, 128, 600}) {
        for (double P : {0.0, 1e-6, 0.04, 0.3, 0.81}) {
            for (double Q : {1e-3, 0.2, 0.49, 0.64, 1.0}) {
                long double want = direct_binomial_sum(
                    L, 1, L - 1, [&](int64_t k) { return k * safe_log(P) + (L - k) * safe_log(Q); });
                double got = binomial_interior(P, Q, L);
                if (want == 0) {
                    EXPECT_EQ(got, 0.0);
                } else {
                    EXPECT_LT(rel(got, static_cast<double>(want)), 1e-12) << "L=" << L << " P=" << P << " Q=" << Q;
                }
            }
        }
    }
}

TEST(BinomialInterior, ClosedFactorization) {
    // (eps^n + (1-eps)^n)^L - eps^{nL} - (1-eps)^{nL} vs the k-sum, L=10, eps=0.2, n=2.
    double e = 0.2;
    long double want = direct_binomial_sum(10, 1, 9, [&](int64_t k) {
        return 2 * k * std::log(0.2L) + 2 * (10 - k) * std::log(0.8L);
    });
    double closed = std::pow(e * e + 0.64, 10) - std::pow(e, 20) - std::pow(0.8, 20);
    EXPECT_LT(rel(binomial_interior(e * e, 0.64, 10), static_cast<double>(want)), 1e-13);
    EXPECT_LT(rel(closed, static_cast<double>(want)), 1e-13);
}

TEST(BinomialInterior, LargeLStaysFinite) {
    for (int64_t L : {1000, 4096, 100000}) {
        double v = binomial_interior(0.3 * 0.3, 0.7 * 0.7, L);
        EXPECT_TRUE(std::isfinite(v));
        EXPECT_GE(v, 0.0);
    }
}

TEST(SpectralLocalAd, Noiseless) {
    for (int64_t L : {1, 4, 64, 1024}) {
        auto s = spectral_local_ad(0, L);
        EXPECT_DOUBLE_EQ(s.lambda_plus, 2.0);
        EXPECT_NEAR(s.lambda_minus, 0.0, 1e-300);
        EXPECT_NEAR(s.sin2theta, 1.0, 1e-15);
    }
}

TEST(SpectralLocalAd, FullyDamped) {
    for (int64_t L : {1, 3, 64}) {
        auto s = spectral_local_ad(1, L);
        EXPECT_DOUBLE_EQ(s.lambda_plus, 2.0);
        EXPECT_EQ(s.lambda_minus, 0.0);
        EXPECT_NEAR(s.cos2theta, -1.0, 1e-15);
    }
}

TEST(SpectralLocalAd, MatchesDenseBlock) {
    for (double e : {0.01, 0.1, 0.3, 0.5, 0.77, 0.99}) {
        for (int64_t L : {1, 2, 3, 8, 20}) {
            double a = std::pow(1 - e, L), b = std::pow(1 - e, L / 2.0), c = 1 + std::pow(e, L);
            auto [lp, lm] = block_eigs(a, b, c);
            auto s = spectral_local_ad(e, L);
            EXPECT_NEAR(s.lambda_plus, lp, 1e-13);
            EXPECT_NEAR(s.lambda_minus, lm, 1e-13);
        }
    }
}

TEST(SpectralLocalAd, Invariants) {
    for (int i = 0; i <= 50; i++) {
        double e = i / 50.0;
        for (int64_t L : {1, 2, 5, 16, 100, 512}) {
            auto s = spectral_local_ad(e, L);
            EXPECT_GE(s.lambda_plus, s.lambda_minus);
            EXPECT_GE(s.lambda_minus, 0.0);
            EXPECT_NEAR(s.cos2theta * s.cos2theta + s.sin2theta * s.sin2theta, 1.0, 1e-12);
            EXPECT_NEAR(s.lambda_plus + s.lambda_minus, 1 + std::pow(e, L) + std::pow(1 - e, L), 1e-12);
        }
    }
}

TEST(SpectralGad, ZeroTemperatureIsAmplitudeDamping) {
    for (double e : {0.0, 0.2, 0.6, 1.0}) {
        for (int64_t L : {1, 4, 33}) {
            auto g = spectral_gad(e, 1.0, L);
            auto s = spectral_local_ad(e, L);
            EXPECT_NEAR(g.lambda_plus, s.lambda_plus, 1e-14);
            EXPECT_NEAR(g.lambda_minus, s.lambda_minus, 1e-14);
            EXPECT_NEAR(g.sin2theta, s.sin2theta, 1e-13);
        }
    }
}

TEST(SpectralGad, MatchesDenseBlock) {
    for (double e : {0.05, 0.3, 0.8}) {
        for (double p : {0.1, 0.5, 0.88}) {
            for (int64_t L : {1, 2, 6, 15}) {
                double al = p * e, be = 1 - p * e, ga = (1 - p) * e, de = 1 - (1 - p) * e;
                double ones = std::pow(be, L) + std::pow(ga, L);
                double zeros = std::pow(de, L) + std::pow(al, L);
                auto [lp, lm] = block_eigs(ones, std::pow(1 - e, L / 2.0), zeros);
                auto s = spectral_gad(e, p, L);
                EXPECT_NEAR(s.lambda_plus, lp, 1e-13);
                EXPECT_NEAR(s.lambda_minus, lm, 1e-13);
                EXPECT_NEAR(s.lambda_plus + s.lambda_minus, ones + zeros, 1e-12);
            }
        }
    }
}

TEST(LocalAdMoments, Noiseless) {
    for (int n = 1; n <= 4; n++) {
        auto m = run_moments_local_ad(0.0, 0.3, 10, n);
        EXPECT_DOUBLE_EQ(m.a, 1.0);
        EXPECT_DOUBLE_EQ(m.u, 0.5);
        EXPECT_NEAR(m.v, 10 * 0.3 / 2, 1e-15);
        EXPECT_NEAR(m.b(), 0.0, 1e-15);
    }
}

TEST(LocalAdMoments, MatchDirectFormulas) {
    for (double e : {0.05, 0.3, 0.7}) {
        for (int64_t L : {1, 2, 5, 12, 40}) {
            for (int n = 1; n <= 4; n++) {
                double a0 = std::pow(1 - e, L), b0 = std::pow(1 - e, L / 2.0), c0 = 1 + std::pow(e, L);
                auto [lp, lm] = block_eigs(a0, b0, c0);
                long double S = direct_binomial_sum(L, 1, L - 1, [&](int64_t k) {
                    return n * (k * std::log(static_cast<long double>(e)) + (L - k) * std::log1p(-static_cast<long double>(e)));
                });
                double scale = std::pow(2.0, -n);
                double a = scale * (std::pow(lp, n) + std::pow(lm, n) + static_cast<double>(S));
                double u = scale / 2 * (std::pow(lp, n) + std::pow(lm, n));
                auto m = run_moments_local_ad(e, 0.2, L, n);
                EXPECT_LT(rel(m.a, a), 1e-12);
                EXPECT_LT(rel(m.u, u), 1e-12);
            }
        }
    }
}

TEST(LocalAdMoments, ProfileOverloadUsesErrorRate) {
    RunParams r;
    r.t1 = 0.8;
    auto m1 = run_moments_local_ad(r, 0.25, 16, 2, DecayProfile::TimeInhomogeneous);
    auto m2 = run_moments_local_ad(error_rate(0.25, 0.8, DecayProfile::TimeInhomogeneous), 0.25, 16, 2);
    EXPECT_EQ(m1.a, m2.a);
    EXPECT_EQ(m1.u, m2.u);
    EXPECT_EQ(m1.v, m2.v);
}

TEST(LocalAdMoments, Invariants) {
    for (int i = 0; i <= 20; i++) {
        double e = i / 20.0;
        for (int64_t L : {1, 3, 16, 256, 2048}) {
            for (int n = 1; n <= 5; n++) {
                auto m = run_moments_local_ad(e, 0.1, L, n);
                EXPECT_GT(m.a, 0.0);
                EXPECT_LE(m.a, 1.0);
                EXPECT_GE(m.u, 0.0);
                EXPECT_LE(m.u, m.a * (1 + 1e-15));
                EXPECT_LE(std::abs(m.v), m.a * static_cast<double>(L) * 0.1 * (1 + 1e-12));
            }
        }
    }
}

TEST(GadMoments, Noiseless) {
    auto m = run_moments_gad(0.0, 0.7, 0.4, 6, 3);
    EXPECT_NEAR(m.a, 1.0, 1e-15);
    EXPECT_NEAR(m.u, 0.5, 1e-15);
    EXPECT_NEAR(m.v, 6 * 0.4 / 2, 1e-14);
}

TEST(GadMoments, ZeroTemperatureIsAmplitudeDamping) {
    for (double e : {0.1, 0.45, 0.9}) {
        for (int64_t L : {1, 4, 17, 300}) {
            for (int n = 1; n <= 3; n++) {
                auto g = run_moments_gad(e, 1.0, 0.2, L, n);
                auto a = run_moments_local_ad(e, 0.2, L, n);
                EXPECT_LT(rel(g.a, a.a), 1e-12);
                EXPECT_LT(rel(g.u, a.u), 1e-12);
                EXPECT_LT(rel(g.v, a.v), 1e-12);
            }
        }
    }
}

TEST(GadMoments, InteriorMatchesDirectSum) {
    for (double e : {0.1, 0.5}) {
        for (double p : {0.3, 0.88}) {
            for (int64_t L : {2, 7, 25}) {
                for (int n = 1; n <= 3; n++) {
                    long double al = p * e, be = 1 - p * e, ga = (1 - p) * e, de = 1 - (1 - p) * e;
                    long double S = direct_binomial_sum(L, 1, L - 1, [&](int64_t k) {
                        long double A = std::pow(al, k) * std::pow(be, L - k) + std::pow(ga, L - k) * std::pow(de, k);
                        return n * std::log(A);
                    });
                    auto s = spectral_gad(e, p, L);
                    double a = std::pow(2.0, -n) *
                               (std::pow(s.lambda_plus, n) + std::pow(s.lambda_minus, n) + static_cast<double>(S));
                    EXPECT_LT(rel(run_moments_gad(e, p, 0.1, L, n).a, a), 1e-12) << e << " " << p << " " << L << " " << n;
                }
            }
        }
    }
}

TEST(GadMoments, LargeLFinite) {
    for (int64_t L : {512, 2048}) {
        auto m = run_moments_gad(0.01, 0.88, 0.01, L, 3);
        EXPECT_TRUE(std::isfinite(m.a) && std::isfinite(m.u) && std::isfinite(m.v));
        EXPECT_GT(m.a, 0.0);
        EXPECT_LE(m.a, 1.0);
    }
}

TEST(GlobalDepolMoments, Noiseless) {
    auto m = run_moments_global_depol(0.0, 0.3, 7, 2);
    auto p = mitigated_affine(aggregate(m));
    EXPECT_DOUBLE_EQ(p.x, 0.5);
    EXPECT_NEAR(p.y, 7 * 0.3 / 2, 1e-15);
}

TEST(GlobalDepolMoments, PurityByHand) {
    // L=3: eps'=7/16 at eps=1/2, GHZ weight 9/16, seven others at 1/16.
    EXPECT_NEAR(run_moments_global_depol(0.5, 0.3, 3, 2).a, 88.0 / 256.0, 1e-15);
    EXPECT_NEAR(run_moments_global_depol(1.0, 0.3, 3, 2).a, 1.0 / 8.0, 1e-15);
}

TEST(GlobalDepolMoments, MaximallyMixedIsConsistent) {
    // eps' = 1 - 2^-L makes rho = I/2^L, so Tr rho^n = 2^{L(1-n)}.
    for (int64_t L : {1, 2, 5}) {
        for (int n = 1; n <= 3; n++) {
            auto m = run_moments_global_depol(1.0, 0.1, L, n);
            EXPECT_LT(rel(m.a, std::pow(2.0, static_cast<double>(L * (1 - n)))), 1e-13);
        }
    }
}

TEST(QutritMoments, Noiseless) {
    auto m = run_moments_qutrit_depol(0.0, 0.5, 4, 2);
    EXPECT_DOUBLE_EQ(m.a, 1.0);
    EXPECT_DOUBLE_EQ(m.u, 0.5);
    EXPECT_DOUBLE_EQ(m.v, 0.25);
}

TEST(QutritMoments, MaximallyMixed) {
    auto m = run_moments_qutrit_depol(1.0, 0.5, 4, 1);
    EXPECT_NEAR(m.a, 1.0, 1e-15);
    EXPECT_NEAR(m.u, 1.0 / 3, 1e-15);
    EXPECT_NEAR(m.v, 0.0, 1e-15);
}

TEST(QutritMoments, PhaseFactorSwitch) {
    auto a = run_moments_qutrit_depol(0.3, 0.5, 8, 2, QutritPhase::PerSiteT);
    auto b = run_moments_qutrit_depol(0.3, 0.5, 8, 2, QutritPhase::PrintedLt);
    EXPECT_EQ(a.a, b.a);
    EXPECT_EQ(a.u, b.u);
    EXPECT_NEAR(b.v, 8 * a.v, 1e-15);
    EXPECT_EQ(parse_qutrit_phase(to_string(QutritPhase::PrintedLt)), QutritPhase::PrintedLt);
    EXPECT_EQ(parse_qutrit_phase("per_qubit_t"), QutritPhase::PerSiteT);
    EXPECT_THROW(parse_qutrit_phase("Lt"), ConfigError);
}

TEST(GenericIncoherent, UniformReproducesGlobalDepol) {
    for (int64_t L : {1, 2, 3, 6}) {
        size_t M = (size_t{1} << L) - 1;
        std::vector<double> p(M, 1.0 / static_cast<double>(M));
        double e = 0.37;
        double ep = e * (1 - std::pow(2.0, -static_cast<double>(L)));
        for (int n = 1; n <= 3; n++) {
            auto g = run_moments_generic_incoherent(ep, p, 0, 0.2, L, n);
            auto d = run_moments_global_depol(e, 0.2, L, n);
            EXPECT_LT(rel(g.a, d.a), 1e-12);
            EXPECT_LT(rel(g.u, d.u), 1e-12);
            EXPECT_LT(rel(g.v, d.v), 1e-12);
        }
    }
}

TEST(GenericIncoherent, SinglePerpStateHasNoBias) {
    std::vector<double> p = {1.0};
    for (double e : {0.0, 0.2, 0.5, 0.9}) {
        for (int n = 1; n <= 4; n++) {
            auto m = run_moments_generic_incoherent(e, p, 0, 0.1, 5, n);
            EXPECT_DOUBLE_EQ(mitigated_affine(aggregate(m)).x, 0.5);
        }
    }
}

TEST(GenericIncoherent, RejectsBadInputs) {
    std::vector<double> bad = {0.5, 0.4};
    EXPECT_THROW(run_moments_generic_incoherent(0.1, bad, 0, 0.1, 3, 2), DomainError);
    std::vector<double> neg = {1.2, -0.2};
    EXPECT_THROW(run_moments_generic_incoherent(0.1, neg, 0, 0.1, 3, 2), DomainError);
    std::vector<double> ok = {0.5, 0.5};
    EXPECT_THROW(run_moments_generic_incoherent(0.1, ok, 2, 0.1, 3, 2), DomainError);
}

TEST(Moments, PurityMonotoneInN) {
    RunParams r;
    r.t1 = 0.9;
    r.excitation_p = 0.8;
    for (auto model : {NoiseModel::LocalAmplitudeDamping, NoiseModel::GeneralizedAmplitudeDamping,
                       NoiseModel::GlobalDepolarizing, NoiseModel::QutritDepolarizing}) {
        for (double t : {0.01, 0.1, 0.5}) {
            for (int64_t L : {1, 4, 32}) {
                for (int n = 1; n < 6; n++) {
                    auto lo = run_moments(model, r, t, L, n, DecayProfile::Markovian);
                    auto hi = run_moments(model, r, t, L, n + 1, DecayProfile::Markovian);
                    EXPECT_LT(hi.a, lo.a * (1 + 1e-14)) << to_string(model) << " t=" << t << " L=" << L << " n=" << n;
                }
            }
        }
    }
    // Pure state: equality.
    for (int n = 1; n < 6; n++) EXPECT_DOUBLE_EQ(run_moments_local_ad(0.0, 0.1, 8, n).a, 1.0);
}

TEST(Moments, DomainErrors) {
    EXPECT_THROW(run_moments_local_ad(-0.1, 0.1, 4, 2), DomainError);
    EXPECT_THROW(run_moments_local_ad(0.1, 0.1, 0, 2), DomainError);
    EXPECT_THROW(run_moments_local_ad(0.1, 0.1, 4, 0), DomainError);
    EXPECT_THROW(run_moments_gad(0.1, 1.5, 0.1, 4, 2), DomainError);
    EXPECT_THROW(run_moments_global_depol(1.5, 0.1, 4, 2), DomainError);
    EXPECT_THROW(run_moments_qutrit_depol(0.1, 0.1, 4, 0), DomainError);
}

TEST(Filtering, BiasShrinksWithCopies) {
    // x(infinity) = 1/2: the dominant eigenvector lies in the real GHZ block.
    for (double e : {0.02, 0.05, 0.1}) {
        for (int64_t L : {4, 8, 16}) {
            double prev = INFINITY;
            for (int n = 1; n <= 6; n++) {
                auto m = run_moments_local_ad(e, 0.1, L, n);
                double d = std::abs(m.u / m.a - 0.5);
                EXPECT_LT(d, prev) << "e=" << e << " L=" << L << " n=" << n;
                prev = d;
            }
        }
    }
}

TEST(Aggregate, JensenAndConstantSchedule) {
    std::vector<RunParams> sched = drift_schedule({1.0, 0.5, 0.25, 11}, 200);
    auto g = aggregate_schedule(NoiseModel::LocalAmplitudeDamping, sched, 0.05, 16, 2, DecayProfile::Markovian);
    EXPECT_EQ(g.n_runs, 200);
    EXPECT_GE(g.meansq_a, g.mean_a * g.mean_a * (1 - 1e-15));
    EXPECT_GE(g.meansq_b, g.mean_b() * g.mean_b() * (1 - 1e-15));

    auto m = run_moments_local_ad(0.2, 0.1, 9, 3);
    std::vector<RunMoments> same(17, m);
    auto c = mitigated_affine(aggregate(same));
    EXPECT_NEAR(c.x, m.u / m.a, 1e-15);
    EXPECT_NEAR(c.y, m.v / m.a, 1e-15);
}

TEST(MitigatedAffine, NoiselessAndDegenerate) {
    auto p = mitigated_affine(aggregate(run_moments_local_ad(0.0, 0.2, 12, 2)));
    EXPECT_DOUBLE_EQ(p.x, 0.5);
    EXPECT_NEAR(p.y, 12 * 0.2 / 2, 1e-15);
    MomentAggregate zero;
    zero.mean_a = 0;
    EXPECT_THROW(mitigated_affine(zero), DegeneracyError);
}

TEST(IncoherentBias, ZeroConditions) {
    EXPECT_EQ(incoherent_bias(0.3, 0.3, 0.1, 0.5, 2), 0.0);
    EXPECT_EQ(incoherent_bias(0.3, 0.7, 0.5, 0.5, 2), 0.0);
    EXPECT_THROW(incoherent_bias(-0.1, 0.3, 0.1, 0.5, 2), DomainError);
    EXPECT_THROW(incoherent_bias(0.1, 0.3, 0.6, 0.5, 2), DomainError);
}

TEST(IncoherentBias, MatchesGlobalDepolDifference) {
    for (int64_t L : {2, 3, 6, 10}) {
        for (int n = 2; n <= 3; n++) {
            double e = 0.4, ee = 0.25, t = 0.3;
            double scale = 1 - std::pow(2.0, -static_cast<double>(L));
            double ep = e * scale, eep = ee * scale;
            double q = 1 / (std::pow(2.0, static_cast<double>(L)) - 1);
            auto m = run_moments_global_depol(e, t, L, n);
            auto me = run_moments_global_depol(ee, t, L, n);
            double direct = std::abs(m.u / m.a - me.u / me.a);
            double E = std::pow(ep, n) / std::pow(1 - ep, n);
            double Ee = std::pow(eep, n) / std::pow(1 - eep, n);
            double norm = std::pow(q, static_cast<double>(n - 1) / n);
            EXPECT_LT(rel(incoherent_bias(E, Ee, q, norm, n), direct), 1e-9) << "L=" << L << " n=" << n;
        }
    }
}

TEST(Renyi, ClosedFormCases) {
    EXPECT_THROW(renyi_error_entropy(0.1, 1.0, 1), DomainError);
    EXPECT_THROW(renyi_error_entropy(0.0, 1.0, 2), DomainError);
    double e = 0.2;
    for (int n = 2; n <= 4; n++) {
        EXPECT_NEAR(renyi_error_entropy(std::pow(e, n), 1.0, n), n * std::log(e) / (1 - n), 1e-13);
        double M = 50;
        double norm = std::pow(M * std::pow(1 / M, n), 1.0 / n);
        EXPECT_NEAR(renyi_error_entropy(std::pow(e, n), norm, n), std::log(M) + n * std::log(e) / (1 - n), 1e-12);
        EXPECT_NEAR(renyi_from_weight(std::pow(e, n) * std::pow(norm, n), n), std::log(M) + n * std::log(e) / (1 - n),
                    1e-12);
    }
    EXPECT_TRUE(std::isnan(renyi_from_weight(0.1, 1)));
}

TEST(Renyi, GrowsLikeLogLAtOptimalTime) {
    EstimatedModel est;
    est.params.t1 = 1.0;
    std::vector<double> lx, h;
    for (int64_t L = 32; L <= 512; L *= 2) {
        auto opt = optimal_time(est, L, 2);
        auto m = run_moments_local_ad(est.params, opt.t_opt, L, 2, DecayProfile::Markovian);
        lx.push_back(std::log(static_cast<double>(L)));
        h.push_back(renyi_from_weight(m.error_weight, 2));
    }
    double mx = 0, my = 0;
    for (size_t i = 0; i < lx.size(); i++) mx += lx[i], my += h[i];
    mx /= lx.size();
    my /= lx.size();
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < lx.size(); i++) sxy += (lx[i] - mx) * (h[i] - my), sxx += (lx[i] - mx) * (lx[i] - mx);
    EXPECT_NEAR(sxy / sxx, 1.0, 0.1);
}

}  // namespace
}  // namespace vpm
