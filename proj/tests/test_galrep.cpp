#include <gtest/gtest.h>

#include <phitau/galrep.hpp>

#include <set>

using namespace phitau;

namespace {

Matrix<FqSeries> random_unit_root(const FqField* F, int d, int M, Rng& rng) {
    for (;;) {
        Matrix<FqSeries> G(d, d, FqSeries(Fq(F), M));
        Matrix<Fq> G0(d, d, Fq(F));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                std::vector<Fq> c;
                for (int k = 0; k < 5; ++k) c.push_back(Fq::random(F, rng));
                G(i, j) = FqSeries::from_coeffs(Fq(F), c, 0, M);
                G0(i, j) = c[0];
            }
        if (!det(G0).is_zero()) return G;
    }
}

Matrix<Fq> random_gl(const FqField* F, int d, Rng& rng) {
    for (;;) {
        Matrix<Fq> A(d, d, Fq(F));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) A(i, j) = Fq::random(F, rng);
        if (!det(A).is_zero()) return A;
    }
}

bool is_zero_row(const FqRow& r) {
    for (const auto& x : r)
        if (!x.is_zero()) return false;
    return true;
}

FqRow add(const FqRow& a, const FqRow& b) {
    FqRow r;
    for (std::size_t i = 0; i < a.size(); ++i) r.push_back(a[i] + b[i]);
    return r;
}

std::vector<std::vector<Fq>> residues(const SolutionSet& S) {
    std::vector<std::vector<Fq>> out;
    for (const auto& x : S.solutions) {
        std::vector<Fq> r;
        for (const auto& c : x) r.push_back(c.coeff(0));
        out.push_back(r);
    }
    return out;
}

bool contains(const SolutionSet& S, const FqRow& x) {
    for (const auto& y : S.solutions) {
        bool eq = true;
        for (std::size_t i = 0; i < x.size() && eq; ++i) eq = x[i] == y[i];
        if (eq) return true;
    }
    return false;
}

Matrix<Fq> fp_matrix(std::uint32_t p, int d, std::vector<std::int64_t> v) {
    Matrix<Fq> A(d, d, Fq(gf(p, 1)));
    for (int i = 0; i < d * d; ++i) A(i / d, i % d) = Fq(gf(p, 1), v[i]);
    return A;
}

}  // namespace

TEST(UnitRoot, TrivialModule) {
    const FqField* F = gf(5, 1);
    auto S = solve_unit_root(constant_series_matrix(fp_matrix(5, 1, {1}), 10));
    EXPECT_EQ(S.s, 1);
    ASSERT_EQ(S.solutions.size(), 5u);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(S.solutions[i][0], FqSeries::constant(Fq(F, static_cast<std::int64_t>(i)), 10));
    EXPECT_EQ(frobenius_action(S, 1), fp_matrix(5, 1, {1}));
}

TEST(UnitRoot, SquareRootOfTwo) {
    // x^3 = 2x over F_3: brute force over F_9 gives 0 and the two roots of x^2 = 2
    auto S = solve_unit_root(constant_series_matrix(fp_matrix(3, 1, {2}), 10));
    EXPECT_EQ(S.s, 2);
    EXPECT_EQ(S.K, gf(3, 2));
    std::vector<Fq> brute;
    for (const Fq& x : all_elements(gf(3, 2)))
        if (x.pow(std::int64_t{3}) == x.scaled(2)) brute.push_back(x);
    ASSERT_EQ(brute.size(), 3u);
    auto res = residues(S);
    ASSERT_EQ(res.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(res[i][0], brute[i]);
    EXPECT_EQ(frobenius_action(S, 1), fp_matrix(3, 1, {2}));
}

TEST(UnitRoot, OnePlusUMatchesBinomialSeries) {
    for (std::uint32_t p : {3u, 5u, 7u}) {
        const FqField* F = gf(p, 1);
        const int M = 25;
        Matrix<FqSeries> G(1, 1, FqSeries::from_coeffs(Fq(F), {Fq(F, 1), Fq(F, 1)}, 0, M));
        auto S = solve_unit_root(G);
        ASSERT_EQ(S.solutions.size(), p);
        // (1 + u)^{1/(p-1)} = sum binom(1/(p-1), k) u^k, p-integral coefficients
        std::vector<Fq> h;
        Rational b = 1;
        const Rational e = Rational(1, p - 1);
        for (int k = 0; k < M; ++k) {
            const BigInt num = numerator(b), den = denominator(b);
            ASSERT_NE(den % p, 0);
            const BigInt r = mod_floor(num * BigInt(PadicInt::from_big(p, 1, den).inverse().residue()), BigInt(p));
            h.emplace_back(F, static_cast<std::int64_t>(r));
            b = b * (e - k) / (k + 1);
        }
        const FqSeries hs = FqSeries::from_coeffs(Fq(F), h, 0, M);
        for (std::uint32_t c = 0; c < p; ++c) EXPECT_EQ(S.solutions[c][0], hs.scaled(Fq(F, c)));
    }
}

TEST(UnitRoot, RandomModulesHaveFullSolutionSpace) {
    Rng rng(3);
    int rejected = 0, tested = 0;
    for (int f : {1, 2}) {
        const FqField* F = gf(3, f);
        while (tested < (f == 1 ? 25 : 50)) {
            const int d = 1 + static_cast<int>(rng.below(3));
            auto G = random_unit_root(F, d, 20, rng);
            SolutionSet S;
            try {
                S = solve_unit_root(G);
            } catch (const ExtensionCapExceeded&) {
                ++rejected;
                continue;
            }
            ++tested;
            ASSERT_EQ(S.solutions.size(), ipow(3, d));
            for (const auto& x : S.solutions)
                for (const auto& r : unit_root_residual(x, G)) EXPECT_TRUE(r.is_zero());
            // an F_p-space: closed under sums (scaling by 2 is x + x)
            for (int t = 0; t < 10; ++t) {
                const auto& a = S.solutions[rng.below(S.solutions.size())];
                const auto& b = S.solutions[rng.below(S.solutions.size())];
                EXPECT_TRUE(contains(S, add(a, b)));
            }
            EXPECT_TRUE(is_zero_row(S.solutions[0]));
            auto res = residues(S);
            EXPECT_TRUE(std::is_sorted(res.begin(), res.end()));
            EXPECT_EQ(std::set<std::vector<Fq>>(res.begin(), res.end()).size(), res.size());
        }
    }
    EXPECT_LT(rejected, 50);
}

TEST(UnitRoot, DirectSumSplits) {
    Rng rng(5);
    const FqField* F = gf(3, 1);
    for (int t = 0; t < 10; ++t) {
        auto G1 = random_unit_root(F, 1, 12, rng);
        auto G2 = random_unit_root(F, 1, 12, rng);
        Matrix<FqSeries> G(2, 2, FqSeries(Fq(F), 12));
        G(0, 0) = G1(0, 0);
        G(1, 1) = G2(0, 0);
        auto S = solve_unit_root(G);
        auto S1 = solve_unit_root(G1), S2 = solve_unit_root(G2);
        ASSERT_EQ(S.solutions.size(), 9u);
        const auto& e1 = embedding(S1.K, S.K);
        const auto& e2 = embedding(S2.K, S.K);
        for (const auto& x : S1.solutions)
            for (const auto& y : S2.solutions) {
                FqRow z{x[0].map([&](const Fq& c) { return e1(c); }), y[0].map([&](const Fq& c) { return e2(c); })};
                EXPECT_TRUE(contains(S, z));
            }
    }
}

TEST(Unramified, Examples) {
    const FqField* F3 = gf(3, 1);
    EXPECT_EQ(unramified_to_phimod(fp_matrix(3, 2, {1, 0, 0, 1}), F3), fp_matrix(3, 2, {1, 0, 0, 1}));
    // (2): one-dimensional, order 2
    auto G = unramified_to_phimod(fp_matrix(3, 1, {2}), F3);
    auto S = solve_unit_root(constant_series_matrix(G, 8));
    EXPECT_EQ(frobenius_action(S, 1), fp_matrix(3, 1, {2}));
    // companion matrix of x^2 + x + 2
    auto C = fp_matrix(3, 2, {0, -2, 1, -1});
    auto GC = unramified_to_phimod(C, F3);
    auto SC = solve_unit_root(constant_series_matrix(GC, 8));
    auto AC = frobenius_action(SC, 1);
    EXPECT_EQ(charpoly(AC), charpoly(C));
    EXPECT_TRUE(similar_small(AC, C));
}

TEST(Unramified, RoundTripPreservesConjugacyClass) {
    Rng rng(7);
    for (int f : {1, 2}) {
        const FqField* Fq0 = gf(3, f);
        for (int t = 0; t < 15; ++t) {
            const int d = 1 + static_cast<int>(rng.below(3));
            auto A = random_gl(gf(3, 1), d, rng);
            if (matrix_order(A, 12 / f) == 0) continue;
            auto G = unramified_to_phimod(A, Fq0);
            auto S = solve_unit_root(constant_series_matrix(G, 6));
            auto B = frobenius_action(S, f);
            EXPECT_EQ(charpoly(A), charpoly(B));
            EXPECT_TRUE(similar_small(A, B));
        }
    }
}

TEST(Similarity, SmallCases) {
    auto J = fp_matrix(3, 2, {1, 1, 0, 1});
    auto I = fp_matrix(3, 2, {1, 0, 0, 1});
    EXPECT_EQ(charpoly(J), charpoly(I));
    EXPECT_FALSE(similar_small(J, I));
    EXPECT_TRUE(similar_small(J, fp_matrix(3, 2, {1, 0, 2, 1})));
}

TEST(Rank1, Examples) {
    const PerfRing* R = perf_ring(gf(3, 1), 2, 2, 6);
    const FqField* F = gf(3, 1);
    auto a0 = solve_rank1(0, Fq(F, 1), R);
    ASSERT_EQ(a0.size(), 3u);
    EXPECT_EQ(a0[1], PerfSeries::one(R));
    auto a1 = solve_rank1(1, Fq(F, 1), R);
    ASSERT_EQ(a1.size(), 3u);
    EXPECT_EQ(a1[2], PerfSeries::monomial(R, Fq(F, 2), Rational(1, 2)));
    auto a2 = solve_rank1(2, Fq(F, 1), R);
    EXPECT_EQ(a2[1], PerfSeries::monomial(R, Fq(F, 1), Rational(1)));
    for (int a = 0; a < 4; ++a)
        for (const auto& x : solve_rank1(a, Fq(F, 1), R))
            EXPECT_EQ(x.frobenius(), PerfSeries::monomial(R, Fq(F, 1), std::int64_t{a} * R->L) * x);
    EXPECT_THROW(solve_rank1(1, Fq(F, 2), R), ExtensionTooSmall);
    EXPECT_THROW(solve_rank1(1, Fq(F, 1), perf_ring(gf(3, 1), 1, 0, 6)), LatticeTooCoarse);
}
