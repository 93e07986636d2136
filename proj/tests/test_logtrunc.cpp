#include <gtest/gtest.h>

#include <phitau/logtrunc.hpp>

using namespace phitau;

namespace {

ZMatrix random_matrix(std::uint64_t p, int N, int d, Rng& rng) {
    ZMatrix A(d, d, PadicInt(p, N, 0));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) A(i, j) = PadicInt(p, N, rng.range(0, static_cast<std::int64_t>(ipow(p, N)) - 1));
    return A;
}

// 1 + p R
ZMatrix random_id_mod_p(std::uint64_t p, int N, int d, Rng& rng) {
    return zidentity(random_matrix(p, N, d, rng)) + scaled(random_matrix(p, N, d, rng), PadicInt(p, N, static_cast<std::int64_t>(p)));
}

// P (1 + U) P^{-1} + p R with U strictly upper triangular: unipotent mod p.
ZMatrix random_unipotent_mod_p(std::uint64_t p, int N, int d, Rng& rng) {
    ZMatrix P = zidentity(random_matrix(p, N, d, rng)), U = P;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            if (i > j) P(i, j) = PadicInt(p, N, rng.range(0, 8));
            if (i < j) U(i, j) = PadicInt(p, N, rng.range(0, 8));
        }
    return P * U * *inverse(P) + scaled(random_matrix(p, N, d, rng), PadicInt(p, N, static_cast<std::int64_t>(p)));
}

ZMatrix random_fixture(std::uint64_t p, int N, Rng& rng) {
    const int d = 1 + static_cast<int>(rng.below(3));
    return rng.below(2) ? random_id_mod_p(p, N, d, rng) : random_unipotent_mod_p(p, N, d, rng);
}

constexpr int kN = 8;

}  // namespace

TEST(LogM, Examples) {
    auto L = log_m(zmatrix(3, 3, 1, {4}), 1);
    EXPECT_EQ(L.shift, 0);
    EXPECT_EQ(L.num(0, 0).residue(), 15u);
    EXPECT_EQ(log_m(zmatrix(5, 6, 2, {1, 0, 0, 1}), 2).valuation(), kInfinity);
    // m = 2 over Z/3^5: the sum carries one division by 3 and loses one digit
    auto L2 = log_m(zmatrix(3, 5, 1, {4}), 2);
    EXPECT_EQ(L2.shift, 1);
    EXPECT_EQ(L2.precision(), 4);
    // sum_{i<9} (-3)^i / i computed with rationals
    Rational s = 0, x = 1;
    for (int i = 1; i < 9; ++i) {
        x *= -3;
        s += x / i;
    }
    EXPECT_EQ(L2.num(0, 0).with_precision(5), PadicInt::from_rational(3, 5, s * 3));
}

TEST(LogM, AgreesWithMinusTheFullLogarithm) {
    Rng rng(21);
    for (std::uint64_t p : {3u, 5u})
        for (int m = 1; m <= 3; ++m)
            for (int t = 0; t < 30; ++t) {
                const ZMatrix A = random_id_mod_p(p, kN, 1 + static_cast<int>(rng.below(3)), rng);
                const ScaledMatrix lm = log_m(A, m);
                const ScaledMatrix lf = ScaledMatrix{log_full(A), 0}.times(-1);
                // the tail starts at (1-A)^{p^m} / p^m
                const int k = std::min(static_cast<int>(ipow(p, m)) - m, lm.precision());
                EXPECT_EQ(congruent(lm, lf, k), Verdict::True) << "p=" << p << " m=" << m;
            }
}

TEST(IsBounded, Examples) {
    Rng rng(22);
    EXPECT_TRUE(is_bounded(random_id_mod_p(3, kN, 3, rng), 3, 0));
    EXPECT_TRUE(is_bounded(zmatrix(3, kN, 3, {1, 1, 5, 0, 1, 2, 0, 0, 1}), 3, 0));
    EXPECT_FALSE(is_bounded(zmatrix(5, kN, 1, {0}), 1, 0));
    EXPECT_TRUE(is_bounded(zmatrix(5, kN, 1, {0}), 1, 1));
    EXPECT_FALSE(is_bounded(zmatrix(5, kN, 1, {2}), 1, 0));
}

TEST(LogM, Multiplicative) {
    Rng rng(23);
    for (std::uint64_t p : {3u, 5u})
        for (int m = 1; m <= 3; ++m) {
            int done = 0;
            while (done < 200) {
                const ZMatrix A = random_fixture(p, kN, rng);
                const ZMatrix a = A.pow(1 + rng.below(9)), b = A.pow(1 + rng.below(9));
                if (!is_bounded(a, m, 0) || !is_bounded(b, m, 0)) continue;
                ++done;
                ASSERT_TRUE(is_bounded(a * b, m, 0));
                const ScaledMatrix lhs = log_m(a * b, m), rhs = log_m(a, m) + log_m(b, m);
                EXPECT_EQ(congruent(lhs, rhs, m - 1), Verdict::True) << "p=" << p << " m=" << m;
            }
        }
}

TEST(LogM, Continuous) {
    Rng rng(24);
    for (std::uint64_t p : {3u, 5u})
        for (int m = 1; m <= 3; ++m) {
            int done = 0;
            while (done < 200) {
                const ZMatrix A = random_fixture(p, kN, rng);
                const ZMatrix I = zidentity(A);
                // B = A + p^m (c0 + c1 A) commutes with A and agrees with it mod p^m
                const PadicInt pm(p, kN, static_cast<std::int64_t>(ipow(p, m)));
                const ZMatrix B = A + scaled(scaled(I, PadicInt(p, kN, rng.range(0, 20))) + scaled(A, PadicInt(p, kN, rng.range(0, 20))), pm);
                if (!is_bounded(A, m, 0) || !is_bounded(B, m, 0)) continue;
                ++done;
                EXPECT_EQ(congruent(log_m(A, m), log_m(B, m), m - 1), Verdict::True);
            }
        }
}

TEST(LogM, Powers) {
    Rng rng(25);
    for (std::uint64_t p : {3u, 5u})
        for (int m = 1; m <= 3; ++m) {
            int done = 0;
            while (done < 200) {
                const ZMatrix A = random_fixture(p, kN, rng);
                if (!is_bounded(A, m, 0)) continue;
                ++done;
                const std::int64_t n = done % 10 == 0 ? 1 + static_cast<std::int64_t>(p * p)
                                                      : static_cast<std::int64_t>(rng.below(ipow(p, m) + 1));
                EXPECT_EQ(congruent(log_m(A.pow(static_cast<std::uint64_t>(n)), m), log_m(A, m).times(n), m - 1), Verdict::True)
                    << "p=" << p << " m=" << m << " n=" << n;
            }
        }
}

TEST(ExpLog, Examples) {
    const ZMatrix I = zmatrix(3, kN, 2, {1, 0, 0, 1});
    EXPECT_EQ(valuation(log_full(I)), kInfinity);
    EXPECT_EQ(exp_full(I - I), I);
    const ZMatrix A = zmatrix(3, kN, 2, {1, 3, 0, 1});
    EXPECT_EQ(exp_full(log_full(A)), A);
    EXPECT_EQ(precision(exp_full(log_full(A))), kN);
    // log(1 + 3E) = 3E - 9E^2/2 + ... and E^2 = 0
    EXPECT_EQ(log_full(A), zmatrix(3, kN, 2, {0, 3, 0, 0}));
}

TEST(ExpLog, RoundTripAndPowers) {
    Rng rng(26);
    for (std::uint64_t p : {3u, 5u, 7u})
        for (int t = 0; t < 40; ++t) {
            const ZMatrix A = random_id_mod_p(p, kN, 1 + static_cast<int>(rng.below(3)), rng);
            const ZMatrix L = log_full(A);
            EXPECT_GE(valuation(L), 1);
            EXPECT_EQ(exp_full(L), A);
            EXPECT_EQ(log_full(exp_full(L)), L);
            const std::int64_t k = 1 + rng.range(0, 9);
            EXPECT_EQ(log_full(A.pow(static_cast<std::uint64_t>(k))), scaled(L, PadicInt(p, kN, k)));
        }
    EXPECT_THROW(log_full(zmatrix(3, kN, 1, {2})), DomainError);
    EXPECT_THROW(exp_full(zmatrix(3, kN, 1, {1})), DomainError);
}

TEST(Rdc, Examples) {
    const int N = 12;
    const ZMatrix I = zmatrix(3, N, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
    for (int i = 1; i <= 6; ++i) EXPECT_EQ(rdc_valuation_check(I, 1, i), Verdict::True);
    // 1 + nilpotent, the nilpotent part cubing to zero
    const ZMatrix f = zmatrix(3, N, 3, {1, 1, 2, 0, 1, 1, 0, 0, 1});
    for (int i = 1; i <= 6; ++i) EXPECT_EQ(rdc_valuation_check(f, 1, i), Verdict::True) << i;
    EXPECT_THROW(rdc_valuation_check(zmatrix(5, N, 3, {1, 1, 2, 0, 1, 1, 0, 0, 1}), 1, 1), DomainError);
    EXPECT_THROW(rdc_valuation_check(zmatrix(3, N, 1, {2}), 0, 1), DomainError);
}

TEST(Rdc, RandomTriples) {
    Rng rng(27);
    const int N = 12;
    int done = 0;
    while (done < 100) {
        const std::uint64_t p = rng.below(2) ? 3 : 5;
        const int d = 1 + static_cast<int>(rng.below(3));
        const ZMatrix f = random_unipotent_mod_p(p, N, d, rng);
        int tmax = 0;
        while (static_cast<std::uint64_t>(d) >= ipow(p, tmax) * (p - 1)) ++tmax;
        const int t = static_cast<int>(rng.below(static_cast<std::uint64_t>(tmax) + 1));
        const int i = 1 + static_cast<int>(rng.below(6));
        ++done;
        EXPECT_EQ(rdc_valuation_check(f, t, i), Verdict::True) << "p=" << p << " d=" << d << " t=" << t << " i=" << i;
    }
}
