#include <gtest/gtest.h>

#include <phitau/suites.hpp>

using namespace phitau;

namespace {

using W = WittVector<Fq>;

W wv(std::uint32_t p, int deg, std::vector<std::int64_t> c) {
    std::vector<Fq> v;
    for (auto x : c) v.emplace_back(gf(p, deg), x);
    return {p, v};
}

W random_w(Rng& rng, const FqField* F, int n) {
    std::vector<Fq> v;
    for (int i = 0; i < n; ++i) v.push_back(Fq::random(F, rng));
    return {F->p, v};
}

}  // namespace

TEST(Witt, LawPolynomials) {
    auto T = WittLawTable::get(3, 2);
    const int nv = 4;
    IntPoly x0 = IntPoly::variable(nv, 0), x1 = IntPoly::variable(nv, 1);
    IntPoly y0 = IntPoly::variable(nv, 2), y1 = IntPoly::variable(nv, 3);
    EXPECT_EQ(T->sum(0).terms(), (x0 + y0).terms());
    EXPECT_EQ(T->product(0).terms(), (x0 * y0).terms());
    IntPoly s1 = x1 + y1 + (x0.pow(3) + y0.pow(3) - (x0 + y0).pow(3)).divided(3);
    EXPECT_EQ(T->sum(1).terms(), s1.terms());
    // ghost identity for every k < n, symbolically
    for (auto [p, n] : {std::pair{3u, 3}, {5u, 2}}) {
        auto L = WittLawTable::get(p, n);
        std::vector<IntPoly> X, Y, S, P;
        for (int i = 0; i < n; ++i) {
            X.push_back(IntPoly::variable(2 * n, i));
            Y.push_back(IntPoly::variable(2 * n, n + i));
            S.push_back(L->sum(i));
            P.push_back(L->product(i));
        }
        for (int k = 0; k < n; ++k) {
            EXPECT_EQ(L->ghost_poly(S, k).terms(), (L->ghost_poly(X, k) + L->ghost_poly(Y, k)).terms());
            EXPECT_EQ(L->ghost_poly(P, k).terms(), (L->ghost_poly(X, k) * L->ghost_poly(Y, k)).terms());
        }
    }
}

TEST(Witt, SmallExamples) {
    EXPECT_EQ(wv(3, 1, {1, 0}) + wv(3, 1, {1, 0}), wv(3, 1, {2, 1}));
    W x = wv(3, 1, {2, 1});
    EXPECT_EQ(x + W::zero(3, 2, x[0]), x);
    EXPECT_EQ(wv(3, 1, {1, 0}).verschiebung(), wv(3, 1, {0, 1}));
    EXPECT_EQ(to_zmod(wv(3, 1, {1, 0})), 1);
    EXPECT_EQ(to_zmod(wv(3, 1, {0, 1})), 3);
    EXPECT_EQ(from_zmod(3, 2, 3), wv(3, 1, {0, 1}));
}

TEST(Witt, TeichmullerIsMultiplicative) {
    const FqField* F = gf(3, 2);
    for (const Fq& a : all_elements(F))
        for (const Fq& b : all_elements(F))
            EXPECT_EQ(W::teichmuller(3, 3, a) * W::teichmuller(3, 3, b), W::teichmuller(3, 3, a * b));
    for (const Fq& a : all_elements(F))
        if (!a.is_zero()) {
            EXPECT_EQ(W::teichmuller(3, 2, a) * W::teichmuller(3, 2, a.pow(7)), W::one(3, 2, a));
        }
}

TEST(Witt, IsomorphicToIntegersModPn) {
    for (auto [p, n] : {std::pair{3u, 2}, {3u, 3}, {5u, 2}}) {
        const std::int64_t mod = static_cast<std::int64_t>(ipow(p, n));
        std::vector<W> elts;
        for (std::int64_t z = 0; z < mod; ++z) {
            W x = from_zmod(p, n, z);
            EXPECT_EQ(to_zmod(x), z);
            elts.push_back(x);
        }
        for (std::int64_t a = 0; a < mod; ++a)
            for (std::int64_t b = 0; b < mod; ++b) {
                EXPECT_EQ(to_zmod(elts[a] + elts[b]), (a + b) % mod);
                EXPECT_EQ(to_zmod(elts[a] * elts[b]), (a * b) % mod);
            }
    }
}

TEST(Witt, GhostOracleOverF9) {
    const FqField* F = gf(3, 2);
    GhostOracle O{F};
    Rng rng(9);
    for (int t = 0; t < 1000; ++t) {
        W x = random_w(rng, F, 3), y = random_w(rng, F, 3);
        EXPECT_EQ(x + y, O.add(x, y));
        EXPECT_EQ(x * y, O.mul(x, y));
    }
}

TEST(Witt, FrobeniusAfterVerschiebungIsMultiplicationByP) {
    const FqField* F = gf(3, 1);
    Rng rng(10);
    for (int t = 0; t < 200; ++t) {
        W x = random_w(rng, F, 3);
        W px = W::from_int(3, 3, x[0], 3) * x;
        EXPECT_EQ(x.verschiebung().frobenius(), px);
        EXPECT_EQ(x.frobenius().verschiebung(), px);
    }
}

TEST(Witt, UnitsInvert) {
    Rng rng(12);
    const FqField* F = gf(5, 2);
    for (int t = 0; t < 100; ++t) {
        W x = random_w(rng, F, 3);
        if (x[0].is_zero()) continue;
        EXPECT_EQ(x * x.inverse(), W::one(5, 3, x[0]));
    }
    EXPECT_THROW(wv(3, 1, {0, 1}).inverse(), DomainError);
}
