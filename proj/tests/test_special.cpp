#include <gtest/gtest.h>

#include <boost/math/special_functions/hypergeometric_1F1.hpp>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "mvda/special.hpp"
#include "test_util.hpp"

using namespace mvda;
using mvda::testing::random_hermitian;
using mvda::testing::rel_err;

// ---------------------------------------------------------------------------
// power mean

TEST(PowerMean, ClassicalMeans) {
    const std::vector<double> w{0.5, 0.5};
    EXPECT_NEAR(power_mean(w, std::vector<double>{2, 4}, 1.0), 3.0, 1e-14);
    EXPECT_NEAR(power_mean(w, std::vector<double>{2, 4}, -1.0), 8.0 / 3.0, 1e-14);
    EXPECT_NEAR(power_mean(w, std::vector<double>{2, 8}, 0.0), 4.0, 1e-14);
    // Approaching the limit from either side.
    EXPECT_NEAR(power_mean(w, std::vector<double>{2, 8}, 1e-10), 4.0, 1e-9);
    EXPECT_NEAR(power_mean(w, std::vector<double>{2, 8}, -1e-6), 4.0, 1e-5);
}

TEST(PowerMean, Errors) {
    EXPECT_THROW(power_mean(std::vector<double>{0.5, 0.4}, std::vector<double>{1, 2}, 1.0), BadWeights);
    EXPECT_THROW(power_mean(std::vector<double>{1.5, -0.5}, std::vector<double>{1, 2}, 1.0), BadWeights);
    EXPECT_THROW(power_mean(std::vector<double>{0.5, 0.5}, std::vector<double>{1}, 1.0), BadWeights);
    EXPECT_THROW(power_mean(std::vector<double>{0.5, 0.5}, std::vector<double>{1, 0}, 1.0), BadSupport);
}

TEST(PowerMean, MonotoneInExponent) {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> w(4), z(4);
        double s = 0.0;
        for (auto& x : w) s += (x = u(gen));
        for (auto& x : w) x /= s;
        // Renormalize so the weights sum to one within rounding.
        w.back() = 1.0 - (w[0] + w[1] + w[2]);
        for (auto& x : z) x = u(gen);
        double prev = 0.0;
        for (double b = -4.0; b <= 4.0; b += 0.25) {
            const double f = power_mean(w, z, b);
            EXPECT_GE(f, prev * (1.0 - 1e-12));
            prev = f;
        }
    }
}

// ---------------------------------------------------------------------------
// partitions

TEST(Partitions, Examples) {
    const auto p0 = partitions_of(0, 3);
    ASSERT_EQ(p0.size(), 1u);
    EXPECT_EQ(p0[0].length(), 0);

    const auto p3 = partitions_of(3, 2);
    ASSERT_EQ(p3.size(), 2u);
    EXPECT_EQ(p3[0], Partition({3}));
    EXPECT_EQ(p3[1], Partition({2, 1}));

    const auto p4 = partitions_of(4, 4);
    const std::vector<Partition> want{Partition({4}), Partition({3, 1}), Partition({2, 2}), Partition({2, 1, 1}),
                                      Partition({1, 1, 1, 1})};
    EXPECT_EQ(p4, want);
}

TEST(Partitions, MatchesExhaustiveEnumeration) {
    for (int len = 1; len <= 4; ++len) {
        for (int m = 0; m <= 9; ++m) {
            // Oracle: every non-increasing tuple of length len over 0..m with sum m.
            std::set<std::vector<int>> oracle;
            std::vector<int> t(len, 0);
            std::function<void(int)> rec = [&](int i) {
                if (i == len) {
                    int s = 0;
                    for (int x : t) s += x;
                    if (s == m) oracle.insert(Partition(t).parts());
                    return;
                }
                for (int v = 0; v <= (i ? t[i - 1] : m); ++v) {
                    t[i] = v;
                    rec(i + 1);
                }
            };
            rec(0);
            const auto got = partitions_of(m, len);
            std::set<std::vector<int>> seen;
            for (std::size_t i = 0; i < got.size(); ++i) {
                EXPECT_EQ(got[i].weight(), m);
                EXPECT_LE(got[i].length(), len);
                seen.insert(got[i].parts());
                if (i > 0) {
                    EXPECT_TRUE(got[i - 1].parts() > got[i].parts()) << "not lexicographically decreasing";
                }
            }
            EXPECT_EQ(seen.size(), got.size()) << "duplicates";
            EXPECT_EQ(seen, oracle);
        }
    }
}

TEST(Partitions, RejectsBadShapes) {
    EXPECT_THROW(Partition({1, 2}), InvalidArgument);
    EXPECT_THROW(Partition({-1}), InvalidArgument);
    EXPECT_THROW(partitions_of(-1, 2), InvalidArgument);
    EXPECT_THROW(partitions_of(2, 0), InvalidArgument);
}

TEST(Partitions, StandardTableauxCount) {
    EXPECT_EQ(standard_tableaux_count(Partition({2, 1})), 2.0);
    EXPECT_EQ(standard_tableaux_count(Partition({3, 2, 1})), 16.0);
    for (int m = 0; m <= 12; ++m)
        for (const auto& k : partitions_of(m, m == 0 ? 1 : m))
            EXPECT_EQ(standard_tableaux_count(k), static_cast<double>(mvda::testing::syt_count(k.parts())))
                << k.to_string();
    // Weight 20 hook-length values are exact integers: the sum of squares is m!.
    long double sq = 0.0;
    for (const auto& k : partitions_of(10, 10)) sq += std::pow(static_cast<long double>(standard_tableaux_count(k)), 2);
    EXPECT_EQ(sq, 3628800.0L);
}

// ---------------------------------------------------------------------------
// gamma

TEST(GammaP, Examples) {
    EXPECT_NEAR(gamma_p_ln(1, 5.0), std::log(24.0), 1e-13);
    EXPECT_NEAR(gamma_p_ln(2, 2.0), std::log(std::numbers::pi), 1e-13);
    EXPECT_NEAR(gamma_p_ln(3, 3.0), std::log(2.0 * std::pow(std::numbers::pi, 3)), 1e-13);
}

TEST(GammaP, DomainError) {
    EXPECT_THROW(gamma_p_ln(2, 1.0), DomainError);
    EXPECT_THROW(gamma_p_ln(3, 1.5), DomainError);
    EXPECT_THROW(gamma_p_ln(GammaPArgs{2, Complex(0.9, 3.0)}), DomainError);
    try {
        gamma_p_ln(2, 0.5);
    } catch (const DomainError& e) {
        ASSERT_EQ(e.conditions().size(), 1u);
        EXPECT_NE(e.conditions()[0].find("p-1"), std::string::npos);
    }
}

TEST(GammaP, Recurrence) {
    for (int p = 1; p <= 6; ++p) {
        for (double a : {p + 0.1, p + 0.5, p + 2.25, p + 17.0, 60.0}) {
            double prod = 1.0;
            for (int j = 1; j <= p; ++j) prod *= a - j + 1;
            EXPECT_LT(rel_err(std::exp(gamma_p_ln(p, a + 1) - gamma_p_ln(p, a)), prod), 1e-10) << p << " " << a;
        }
    }
}

TEST(GammaP, ComplexArgumentPath) {
    // The Lanczos path must agree with std::lgamma on the real axis.
    for (double x : {0.3, 1.0, 2.5, 7.75, 30.0, 99.0}) {
        EXPECT_NEAR(lgamma_complex(Complex(x, 0.0)).real(), std::lgamma(x), 1e-12 * std::max(1.0, std::lgamma(x)));
    }
    // |Gamma(1 + iy)|^2 = pi y / sinh(pi y)
    for (double y : {0.5, 1.0, 3.0}) {
        const double want = 0.5 * std::log(std::numbers::pi * y / std::sinh(std::numbers::pi * y));
        EXPECT_NEAR(lgamma_complex(Complex(1.0, y)).real(), want, 1e-12);
    }
    // Gamma(z + 1) = z Gamma(z) modulo 2 pi i
    const Complex z(2.3, 1.7);
    const Complex diff = lgamma_complex(z + 1.0) - lgamma_complex(z) - std::log(z);
    EXPECT_NEAR(diff.real(), 0.0, 1e-12);
    EXPECT_NEAR(std::remainder(diff.imag(), 2.0 * std::numbers::pi), 0.0, 1e-12);
    // Complex gamma_p agrees with the real path when the imaginary part is zero.
    const Complex c = gamma_p_ln(GammaPArgs{3, Complex(4.5, 1e-300)});
    EXPECT_NEAR(c.real(), gamma_p_ln(3, 4.5), 1e-11);
}

// ---------------------------------------------------------------------------
// Pochhammer

TEST(Pochhammer, Examples) {
    EXPECT_EQ(pochhammer_gen(Complex(7.3, -1.0), Partition{}), Complex(1.0, 0.0));
    EXPECT_EQ(pochhammer_gen(2.0, Partition({3})), Complex(24.0, 0.0));
    EXPECT_EQ(pochhammer_gen(3.0, Partition({2, 1})), Complex(24.0, 0.0));
    EXPECT_EQ(pochhammer_gen(1.0, Partition({1, 1})), Complex(0.0, 0.0));
}

TEST(Pochhammer, GammaPConsistency) {
    // Gamma_p(a) [a]_M = pi^{p(p-1)/2} prod_j Gamma(a - j + 1 + m_j)
    for (int p = 1; p <= 4; ++p) {
        for (double a : {p - 0.5, p + 0.75, p + 3.0}) {
            for (int m = 0; m <= 5; ++m) {
                for (const auto& k : partitions_of(m, p)) {
                    double lhs_log = gamma_p_ln(p, a) + std::log(pochhammer_gen(a, k).real());
                    double rhs_log = 0.5 * p * (p - 1) * std::log(std::numbers::pi);
                    for (int j = 0; j < p; ++j) rhs_log += std::log(std::tgamma(a - j + k[j]));
                    EXPECT_TRUE(std::isfinite(lhs_log));
                    EXPECT_NEAR(lhs_log, rhs_log, 1e-11 * std::max(1.0, std::abs(rhs_log)));
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Schur / zonal

TEST(Schur, SmallShapes) {
    const std::vector<double> x{0.3, -1.2, 2.5};
    EXPECT_NEAR(schur_eval(Partition({1}), x), 0.3 - 1.2 + 2.5, 1e-14);
    EXPECT_NEAR(schur_eval(Partition({1, 1}), std::vector<double>{1.5, -0.4}), -0.6, 1e-14);
    EXPECT_EQ(schur_eval(Partition({1, 1, 1}), std::vector<double>{1.0, 2.0}), 0.0);
    EXPECT_EQ(schur_eval(Partition{}, x), 1.0);
}

TEST(Schur, MatchesTableauxEnumeration) {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int trial = 0; trial < 5; ++trial) {
        for (int n = 1; n <= 4; ++n) {
            std::vector<double> x(n);
            for (auto& v : x) v = u(gen);
            for (int m = 0; m <= 6; ++m)
                for (const auto& k : partitions_of(m, n)) {
                    const double want = mvda::testing::ssyt_schur(k, x);
                    EXPECT_NEAR(schur_eval(k, x), want, 1e-11 * std::max(1.0, std::abs(want))) << k.to_string();
                }
        }
    }
}

TEST(Schur, CoincidentVariables) {
    // s_kappa(c, ..., c) = c^m s_kappa(1, ..., 1); the bialternant is singular here.
    for (int n = 1; n <= 4; ++n) {
        const std::vector<double> ones(n, 1.0), cs(n, 0.7);
        for (int m = 0; m <= 6; ++m)
            for (const auto& k : partitions_of(m, n)) {
                const double want = std::pow(0.7, m) * mvda::testing::ssyt_schur(k, ones);
                EXPECT_NEAR(schur_eval(k, cs), want, 1e-12 * std::max(1.0, want));
            }
    }
}

TEST(Zonal, Examples) {
    for (int m = 0; m <= 6; ++m) EXPECT_NEAR(zonal_c(Partition({m}), HermitianMatrix::scalar(1.3)), std::pow(1.3, m), 1e-12);
    std::mt19937_64 gen(22);
    const auto x = random_hermitian(gen, 3);
    EXPECT_NEAR(zonal_c(Partition({1}), x), x.trace(), 1e-13);
}

TEST(Zonal, NormalizationIdentity) {
    std::mt19937_64 gen(23);
    for (int trial = 0; trial < 10; ++trial) {
        for (int p = 1; p <= 4; ++p) {
            const auto x = random_hermitian(gen, p);
            for (int m = 0; m <= 6; ++m) {
                double s = 0.0, scale = 0.0;
                for (const auto& k : partitions_of(m, p)) {
                    const double c = zonal_c(k, x);
                    s += c;
                    scale += std::abs(c);
                }
                const double want = std::pow(x.trace(), m);
                EXPECT_LE(std::abs(s - want), 1e-8 * std::max(std::abs(want), scale));
            }
        }
    }
}

TEST(Zonal, UnitaryInvariance) {
    std::mt19937_64 gen(24);
    for (int trial = 0; trial < 10; ++trial) {
        const auto x = random_hermitian(gen, 3);
        const auto u = mvda::testing::random_unitary(gen, 3);
        const HermitianMatrix y(u * x.mat() * u.adjoint());
        for (int m = 1; m <= 5; ++m)
            for (const auto& k : partitions_of(m, 3)) EXPECT_NEAR(zonal_c(k, x), zonal_c(k, y), 1e-8);
    }
}

// ---------------------------------------------------------------------------
// 1F1

TEST(Hyp1F1, ZeroArgument) {
    const auto r = hyp1f1_matrix(2.0, 5.0, HermitianMatrix::zero(3));
    EXPECT_EQ(r.value, Complex(1.0, 0.0));
    EXPECT_TRUE(r.converged);
}

TEST(Hyp1F1, ScalarEqualParametersGiveExponential) {
    for (double x = -5.0; x <= 5.0; x += 0.5) {
        TruncationPolicy pol;
        pol.max_order = 60;
        const auto r = hyp1f1_matrix(2.5, 2.5, HermitianMatrix::scalar(x), pol);
        EXPECT_LT(rel_err(r.value.real(), std::exp(x)), 1e-10) << x;
    }
}

TEST(Hyp1F1, ScalarMatchesBoost) {
    for (double a : {0.5, 1.0, 2.5}) {
        for (double c : {1.5, 3.0, 6.5}) {
            for (double x : {-2.0, -0.3, 0.7, 2.0}) {
                const double want = boost::math::hypergeometric_1F1(a, c, x);
                EXPECT_LT(rel_err(hyp1f1_matrix(a, c, HermitianMatrix::scalar(x)).value.real(), want), 1e-10);
            }
        }
    }
}

TEST(Hyp1F1, KummerTransformation) {
    const double a = 1.5, c = 3.2;
    for (double x = -2.0; x <= 2.0; x += 0.25) {
        const double lhs = hyp1f1_matrix(a, c, HermitianMatrix::scalar(x)).value.real();
        const double rhs = std::exp(x) * hyp1f1_matrix(c - a, c, HermitianMatrix::scalar(-x)).value.real();
        EXPECT_LT(rel_err(lhs, rhs), 1e-8);
    }
}

TEST(Hyp1F1, MatrixKummerTransformation) {
    // 1F1(a; c; X) = etr(X) 1F1(c - a; c; -X) also holds for matrix argument.
    std::mt19937_64 gen(25);
    for (int trial = 0; trial < 5; ++trial) {
        const auto x = random_hermitian(gen, 2, -0.5, 0.5);
        const double lhs = hyp1f1_matrix(2.5, 6.0, x).value.real();
        const double rhs = std::exp(x.trace()) * hyp1f1_matrix(3.5, 6.0, -1.0 * x).value.real();
        EXPECT_LT(rel_err(lhs, rhs), 1e-10);
    }
}

TEST(Hyp1F1, PochhammerPole) {
    // [c]_kappa with c = 1 vanishes once kappa has a second row.
    EXPECT_THROW(hyp1f1_matrix(1.0, 1.0, HermitianMatrix::diagonal({0.1, 0.2})), PochhammerPole);
    EXPECT_THROW(hyp1f1_matrix(1.0, -2.0, HermitianMatrix::scalar(0.5)), PochhammerPole);
    EXPECT_NO_THROW(hyp1f1_matrix(1.0, 1.0, HermitianMatrix::scalar(0.5)));
}

TEST(Hyp1F1, TruncationDiagnostics) {
    TruncationPolicy pol;
    pol.max_order = 3;
    const auto r = hyp1f1_matrix(1.0, 2.0, HermitianMatrix::diagonal({3.0, 2.0}), pol);
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.order_reached, 3);
    EXPECT_GT(r.last_increment, 0.0);

    const auto full = hyp1f1_matrix(1.0, 2.0, HermitianMatrix::diagonal({0.3, 0.2}));
    EXPECT_TRUE(full.converged);
    EXPECT_LT(full.order_reached, 25);

    TruncationPolicy bad;
    bad.rel_stop = 0.0;
    EXPECT_THROW(hyp1f1_matrix(1.0, 2.0, HermitianMatrix::scalar(0.1), bad), InvalidArgument);
}

TEST(Hyp1F1, ExponentialSeries) {
    // sum_{m<=10} sum_kappa C_kappa(X)/m! against exp(tr X) for ||X|| <= 0.5
    std::mt19937_64 gen(26);
    for (int trial = 0; trial < 10; ++trial) {
        for (int p = 1; p <= 3; ++p) {
            auto x = random_hermitian(gen, p);
            const auto ev = eigvals_hermitian(x);
            const double radius = std::max(std::abs(ev.front()), std::abs(ev.back()));
            x = (0.5 / radius) * x;
            double s = 0.0, fact = 1.0;
            for (int m = 0; m <= 10; ++m) {
                if (m) fact *= m;
                for (const auto& k : partitions_of(m, p)) s += zonal_c(k, x) / fact;
            }
            EXPECT_LT(rel_err(s, std::exp(x.trace())), 1e-6);
        }
    }
}
