#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "tiepoisson/bounds.hpp"
#include "tiepoisson/exact_oracle.hpp"
#include "tiepoisson/poisson.hpp"

using namespace tiepoisson;

namespace {
double sum_terms(const BoundReport& r) {
    double s = 0.0;
    for (const auto& [k, v] : r.terms) s += v;
    return s;
}
}  // namespace

TEST(PairTieBound, BirthdayValue) {
    const auto rep = tv_bound_W(Instance(23, DiscretePMF::uniform(365)));
    // 2n/N + 2n (1/N^2)/(1/N) = 4n/N
    EXPECT_NEAR(rep.bound_value, 92.0 / 365.0, 1e-15);
    EXPECT_NEAR(rep.auxiliary.at("relaxed_4n_over_N"), 92.0 / 365.0, 1e-15);
    EXPECT_NEAR(rep.lambda.at(0), 253.0 / 365.0, 1e-15);
    EXPECT_EQ(rep.terms.size(), 2u);
}

TEST(PairTieBound, GeometricTwoTermsAndRelaxation) {
    const double p = 0.001;
    const auto rep = tv_bound_W(Instance(10, DiscretePMF::geometric(p)));
    double pi = 0.0, rho = 0.0;
    for (int x = 1; x < 60000; ++x) {
        const double q = p * std::pow(1 - p, x - 1);
        pi += q * q;
        rho += q * q * q;
    }
    EXPECT_NEAR(rep.terms.at("two_n_pi"), 20.0 * pi, 1e-12);
    EXPECT_NEAR(rep.terms.at("two_n_rho_over_pi"), 20.0 * rho / pi, 1e-12);
    EXPECT_NEAR(rep.auxiliary.at("relaxed_6np"), 0.06, 1e-15);
    EXPECT_LE(rep.bound_value, rep.auxiliary.at("relaxed_6np"));
}

TEST(PairTieBound, SinglePointSupport) {
    // pi = rho = 1: vacuous but finite
    const auto rep = tv_bound_W(Instance(3, DiscretePMF::explicit_masses({{1, 1.0}})));
    EXPECT_DOUBLE_EQ(rep.bound_value, 12.0);
}

TEST(PairTieBound, DominatesExactDistance) {
    for (int N = 2; N <= 30; N += 4)
        for (int n = 2; n <= 7; ++n) {
            const Instance inst(n, DiscretePMF::uniform(N));
            const auto tv = exact_tv(exact_law_W(inst), poisson_law(lambda_W(inst)));
            EXPECT_GE(tv_bound_W(inst).bound_value, tv.upper);
        }
    const Instance e(5, DiscretePMF::from_masses({0.4, 0.3, 0.2, 0.1}));
    EXPECT_GE(tv_bound_W(e).bound_value, exact_tv(exact_law_W(e), poisson_law(lambda_W(e))).upper);
}

TEST(StrictTieBound, UniformBirthdayValue) {
    const auto rep = tv_bound_Yr_uniform(365, 23, 2);
    const double N = 365, n = 23, r = 2;
    const double pi = std::pow(1 / N, 1) * std::pow(1 - 1 / N, 21);
    const double lam = 253 * pi;
    const double bracket = 2 * r / N * std::exp(2 * r / (N - 1)) + r * r / n + 1 / N + n / (N * N) * std::exp(2 * n / (N - 1));
    EXPECT_NEAR(rep.bound_value, pi + std::min(lam, lam * lam) * bracket, 1e-14);
    EXPECT_NEAR(rep.bound_value, 0.083051, 5e-6);
    EXPECT_NEAR(rep.bound_value, sum_terms(rep), 1e-15);
}

TEST(StrictTieBound, GeometricBracket) {
    const auto rep = tv_bound_Yr_geometric(0.01, 10, 2);
    const double p = 0.01, n = 10, r = 2;
    const double bracket = 2 * r * p * std::exp(2 * r * p / (1 - p)) + r * r / n + r * p + n * p * p * std::exp(n * p);
    EXPECT_NEAR(bracket, 0.462754, 5e-6);
    EXPECT_NEAR((rep.bound_value - rep.terms.at("pi")) / rep.auxiliary.at("prefactor"), bracket, 1e-12);
    EXPECT_EQ(rep.validity_notes.size(), 2u);
}

TEST(StrictTieBound, Preconditions) {
    EXPECT_THROW(tv_bound_Yr_uniform(10, 5, 3), domain_error);
    EXPECT_THROW(tv_bound_Yr_uniform(10, 6, 1), domain_error);
    EXPECT_THROW(tv_bound_Yr_uniform(1, 6, 2), validation_error);
    EXPECT_THROW(tv_bound_Yr_geometric(1.5, 6, 2), validation_error);
    EXPECT_THROW(tv_bound_Yr_general(Instance(5, DiscretePMF::uniform(4)), 3), domain_error);
    EXPECT_THROW(bhj_bound_uniform(10, 3, 2), domain_error);
    EXPECT_THROW(mu_y(1.0, 0.2, 6, 2), domain_error);
    EXPECT_THROW(mu_y(DiscretePMF::uniform(3), 6, 2, 1, 1), domain_error);
}

TEST(StrictTieBound, MuKernelDirect) {
    // px = 0.2, py = 0.3, n = 6, r = 2: 0.09 * (1 - 0.375)^2 * (0.8^-2 - 0.49)
    EXPECT_NEAR(mu_y(0.2, 0.3, 6, 2), 0.09 * 0.390625 * (1.5625 - 0.49), 1e-15);
}

TEST(StrictTieBound, DominanceUniformAndExplicit) {
    for (int N = 2; N <= 14; ++N)
        for (int n = 4; n <= 7; ++n)
            for (int r : {2, 3}) {
                if (n < 2 * r) continue;
                const Instance inst(n, DiscretePMF::uniform(N));
                const auto tv = exact_tv(exact_law_Yr(inst, r), poisson_law(lambda_r(inst, r)));
                EXPECT_GE(tv_bound_Yr_uniform(N, n, r).bound_value, tv.upper) << N << " " << n << " " << r;
                EXPECT_GE(tv_bound_Yr_general(inst, r).bound_value, tv.upper) << N << " " << n << " " << r;
            }
    const Instance e(6, DiscretePMF::from_masses({0.3, 0.3, 0.2, 0.1, 0.1}));
    EXPECT_GE(tv_bound_Yr_general(e, 2).bound_value, exact_tv(exact_law_Yr(e, 2), poisson_law(lambda_r(e, 2))).upper);
}

TEST(StrictTieBound, DominanceGeometric) {
    for (double p : {0.2, 0.3})
        for (int n = 4; n <= 6; ++n) {
            const Instance inst(n, DiscretePMF::geometric(p));
            const auto tv = exact_tv(exact_law_Yr(inst, 2), poisson_law(lambda_r(inst, 2)));
            EXPECT_GE(tv_bound_Yr_geometric(p, n, 2).bound_value, tv.upper);
            const auto gen = tv_bound_Yr_general(inst, 2);
            EXPECT_GE(gen.bound_value, tv.upper);
            EXPECT_GT(gen.terms.at("truncation_tail"), 0.0);
            EXPECT_LT(gen.terms.at("truncation_tail"), 1e-9);
        }
}

TEST(StrictTieBound, GeneralUniformClassesAgreeWithExplicit) {
    // one mass class of multiplicity N must equal N explicit points
    for (int N : {3, 7, 20}) {
        const auto u = tv_bound_Yr_general(Instance(6, DiscretePMF::uniform(N)), 2);
        const auto e = tv_bound_Yr_general(Instance(6, DiscretePMF::from_masses(oracle::uniform_masses(N))), 2);
        EXPECT_NEAR(u.bound_value, e.bound_value, 1e-12 * u.bound_value);
    }
}

TEST(StrictTieBound, SharpPrefactorNoLarger) {
    const auto rep = tv_bound_Yr_general(Instance(23, DiscretePMF::uniform(365)), 2);
    EXPECT_LE(rep.auxiliary.at("sharp_prefactor"), rep.auxiliary.at("prefactor"));
    EXPECT_LE(rep.auxiliary.at("sharp_bound"), rep.bound_value);
}

TEST(Classical, BirthdayComparison) {
    const double lam = lambda_r(Instance(23, DiscretePMF::uniform(365)), 2);
    const double ref = lam * lam * (1.0 / 365 + 6.0 * 23 / (365.0 * 365) + 24.0 / 23);
    EXPECT_NEAR(bhj_bound_uniform(365, 23, 2), ref, 1e-14);
    EXPECT_LT(tv_bound_Yr_uniform(365, 23, 2).bound_value, bhj_bound_uniform(365, 23, 2));
    EXPECT_TRUE(bhj_crossover(365, 23, 2).holds());
}

TEST(Classical, CrossoverFailsWhenBoxesScarce) {
    // 2r/N dominates once N is tiny relative to r
    const auto c = bhj_crossover(3, 200, 4);
    EXPECT_FALSE(c.holds());
}

TEST(Property, UniformBoundDecreasesInN) {
    for (int r : {2, 3}) {
        double prev = INFINITY;
        for (int N = 200; N <= 3200; N *= 2) {
            const double b = tv_bound_Yr_uniform(N, 30, r).bound_value;
            EXPECT_LT(b, prev);
            prev = b;
        }
    }
}

TEST(Property, PairBoundIncreasesInN) {
    double prev = 0.0;
    for (int n = 2; n <= 40; ++n) {
        const double b = tv_bound_W(Instance(n, DiscretePMF::uniform(1000))).bound_value;
        EXPECT_GT(b, prev);
        prev = b;
    }
}

TEST(Multivariate, TermsAndLambdas) {
    const auto rep = tv_bound_multivariate(100, 20, 2, 3);
    const Instance inst(20, DiscretePMF::uniform(100));
    const double l2 = lambda_r(inst, 2), l3 = lambda_r(inst, 3);
    ASSERT_EQ(rep.lambda.size(), 2u);
    EXPECT_DOUBLE_EQ(rep.lambda[0], l2);
    const double diag = l2 * l2 * (4.0 / 100 + 4.0 / 20 + 1.0 / 100 + 20.0 / 1e4) +
                        l3 * l3 * (6.0 / 100 + 9.0 / 20 + 1.0 / 100 + 20.0 / 1e4);
    const double cross = 2 * l2 * l3 * (5.0 / 100 + 6.0 / 20 + 1.0 / 100 + 20.0 / 1e4);
    EXPECT_NEAR(rep.bound_value, diag + cross, 1e-12 * rep.bound_value);
    EXPECT_NEAR(rep.auxiliary.at("diagonal"), diag, 1e-12 * diag);
    EXPECT_EQ(rep.terms.count("T1"), 0u);
}

TEST(Multivariate, SingleOrderHasNoCrossTerms) {
    const auto rep = tv_bound_multivariate(50, 10, 3, 3);
    EXPECT_DOUBLE_EQ(rep.auxiliary.at("cross"), 0.0);
    EXPECT_NEAR(rep.bound_value, multivariate_diagonal_summand(50, 10, 3), 1e-15);
}

TEST(Multivariate, Preconditions) {
    EXPECT_THROW(tv_bound_multivariate(10, 5, 3, 2), validation_error);
    EXPECT_THROW(tv_bound_multivariate(10, 5, 2, 6), domain_error);
    EXPECT_THROW(tv_bound_multivariate(1, 5, 2, 3), validation_error);
}

TEST(Multivariate, MagnitudeOnSmallGrid) {
    double worst = 0.0;
    for (int N = 2; N <= 10; ++N)
        for (int n = 3; n <= 6; ++n) {
            const Instance inst(n, DiscretePMF::uniform(N));
            const double tv = exact_tv(exact_joint_law(inst, 2, 3),
                                       product_poisson_law(PoissonSpec{{lambda_r(inst, 2), lambda_r(inst, 3)}}))
                                  .value;
            worst = std::max(worst, tv / tv_bound_multivariate(N, n, 2, 3).bound_value);
        }
    EXPECT_LE(worst, 10.0);
}

TEST(Multivariate, DiagonalSummandsShrinkAlongPowerPath) {
    for (int a = 6; a <= 9; ++a) {
        double prev = INFINITY;
        for (long N : {10'000L, 100'000L, 1'000'000L}) {
            const double s = multivariate_diagonal_summand(N, std::llround(std::pow(N, 0.9)), a);
            EXPECT_LT(s, prev) << a << " " << N;
            prev = s;
        }
    }
}

TEST(Window, PowerPathAtMillion) {
    const long N = 1'000'000;
    const long n = std::llround(std::pow(N, 0.9));
    const auto w = regime_window(N, n);
    ASSERT_TRUE(w.found) << w.diagnostic;
    ASSERT_TRUE(w.report.has_value());
    EXPECT_LE(w.report->bound_value, 0.1);
    EXPECT_GE(lambda_r(Instance(n, DiscretePMF::uniform(N)), w.B), 1.0);
    EXPECT_LE(w.A, w.B);
}

TEST(Window, SqrtNLogNSelectsPairs) {
    const long N = 1'000'000;
    const long n = std::llround(std::sqrt(N * std::log(N)));
    const auto w = regime_window(N, n);
    ASSERT_TRUE(w.found);
    EXPECT_EQ(w.A, 2);
    EXPECT_EQ(w.B, 2);
    EXPECT_NEAR(lambda_r(Instance(n, DiscretePMF::uniform(N)), 2), std::log(N) / 2, 0.1);
}

TEST(Window, NOverLogNReportsAnalyticForms) {
    const long N = 1'000'000;
    const long n = std::llround(N / std::log(N));
    const auto w = regime_window(N, n);
    EXPECT_TRUE(w.n_is_N_over_logN);
    const double ln = std::log(N);
    EXPECT_NEAR(w.analytic_A, ln / (3 * std::log(ln)), 1e-12);
    EXPECT_NEAR(w.analytic_B, ln / (2 * std::log(ln)), 1e-12);
    ASSERT_TRUE(w.found) << w.diagnostic;
    EXPECT_GE(lambda_r(Instance(n, DiscretePMF::uniform(N)), w.B), 1.0);
}

TEST(Window, NoWindowDiagnostics) {
    const auto small = regime_window(10'000, std::llround(std::pow(10'000, 0.9)));
    EXPECT_FALSE(small.found);
    EXPECT_FALSE(small.diagnostic.empty());
    const auto crowded = regime_window(100, 150);
    EXPECT_FALSE(crowded.found);
    EXPECT_NE(crowded.diagnostic.find("n < N"), std::string::npos);
    const auto sparse = regime_window(1'000'000, 10);
    EXPECT_FALSE(sparse.found);
    EXPECT_NE(sparse.diagnostic.find("lambda_a"), std::string::npos);
}
