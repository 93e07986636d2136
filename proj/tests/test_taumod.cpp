#include <gtest/gtest.h>

#include <phitau/taumod.hpp>

#include <set>

using namespace phitau;

namespace {

constexpr BivarWeights kW{1, 1};

BivarSeries zero_series(const FqField* F, int prec) { return BivarSeries(F, kW, prec); }

BivarSeries mono(const FqField* F, int prec, std::int64_t c, int i, int j) {
    return BivarSeries::monomial(F, kW, prec, Fq(F, c), i, j);
}

BivarSeries random_series(const FqField* F, int prec, int imin, Rng& rng, bool eta_free = false) {
    BivarSeries f = zero_series(F, prec);
    for (int i = imin; i < prec; ++i)
        for (int j = 0; i + j < prec && (j == 0 || !eta_free); ++j)
            if (rng.below(3) == 0) f = f + BivarSeries::monomial(F, kW, prec, Fq::random(F, rng), i, j);
    return f;
}

PadicInt rand_padic(std::uint64_t p, int N, Rng& rng) { return PadicInt(p, N, rng.range(0, static_cast<std::int64_t>(ipow(p, N)) - 1)); }

PadicInt rand_unit(std::uint64_t p, int N, Rng& rng) {
    for (;;) {
        PadicInt x = rand_padic(p, N, rng);
        if (x.residue() % p) return x;
    }
}

Matrix<Fq> three_cycle(const FqField* F) {
    Matrix<Fq> P(3, 3, Fq(F));
    P(1, 0) = P(2, 1) = P(0, 2) = Fq::one(F);
    return P;
}

BMatrix random_column(const FqField* F, int prec, Rng& rng) {
    BMatrix X(3, 1, zero_series(F, prec));
    for (int i = 0; i < 3; ++i) X(i, 0) = random_series(F, prec, -2, rng, true);
    return X;
}

}  // namespace

TEST(BinomPower, Examples) {
    const FqField* F = gf(3, 1);
    const int P = 20;
    const BivarSeries like = zero_series(F, P);
    const BivarSeries one = like.one_like(), eta = like.eta();
    EXPECT_EQ(binom_power(PadicInt(3, 10, 3), like), one + eta.pow(3));
    EXPECT_EQ(binom_power(PadicInt(3, 10, 0), like), one);
    EXPECT_EQ(binom_power(PadicInt(3, 10, -1), like) * (one + eta), one);
    const PadicInt half = PadicInt(3, 10, -1) * PadicInt(3, 10, 2).inverse();
    EXPECT_EQ(binom_power(half, like).pow(2), binom_power(PadicInt(3, 10, -1), like));
    // eta-degree up to 19 needs digits through 3^2
    EXPECT_THROW(binom_power(PadicInt(3, 2, 1), like), PrecisionError);
    EXPECT_NO_THROW(binom_power(PadicInt(3, 3, 1), like));
}

TEST(BinomPower, IsAHomomorphism) {
    Rng rng(11);
    for (std::uint64_t p : {3u, 5u}) {
        const BivarSeries like = zero_series(gf(static_cast<std::uint32_t>(p), 1), 30);
        for (int t = 0; t < 50; ++t) {
            const PadicInt a = rand_padic(p, 6, rng), b = rand_padic(p, 6, rng);
            EXPECT_EQ(binom_power(a + b, like), binom_power(a, like) * binom_power(b, like));
        }
    }
}

TEST(GaloisAct, TauExample) {
    const FqField* F = gf(3, 1);
    const int P = 12;
    const GaloisElt tau = standard_tau(3, 10);
    const BivarSeries u = zero_series(F, P).u(), eta = zero_series(F, P).eta();
    EXPECT_EQ(galois_act(tau, u), u + u * eta);
    EXPECT_EQ(galois_act(tau, eta), eta);
    // g in G_inf fixes u and moves eta
    const GaloisElt g(PadicInt(3, 10, 0), PadicInt(3, 10, 4));
    EXPECT_EQ(galois_act(g, u), u);
    EXPECT_EQ(galois_act(g, eta), binom_power(PadicInt(3, 10, 4), eta) - eta.one_like());
    EXPECT_EQ(galois_act(g, eta), eta + eta.pow(3) + eta.pow(4));
    const BivarSeries uinv = mono(F, P, 1, -1, 0);
    EXPECT_EQ(galois_act(tau, uinv) * galois_act(tau, u), u.one_like());
}

TEST(GaloisAct, IsARingMorphismAndPreservesPrecision) {
    Rng rng(12);
    const FqField* F = gf(3, 2);
    for (int t = 0; t < 1000; ++t) {
        const GaloisElt g(rand_padic(3, 8, rng), rand_unit(3, 8, rng));
        const BivarSeries f = random_series(F, 7, -1, rng), h = random_series(F, 7, 0, rng);
        EXPECT_EQ(galois_act(g, f).precision(), f.precision());
        EXPECT_EQ(galois_act(g, f + h), galois_act(g, f) + galois_act(g, h));
        EXPECT_EQ(galois_act(g, f * h), galois_act(g, f) * galois_act(g, h));
    }
}

TEST(GaloisAct, MatchesGroupLaw) {
    Rng rng(13);
    for (std::uint64_t p : {3u, 5u}) {
        const FqField* F = gf(static_cast<std::uint32_t>(p), 1);
        for (int t = 0; t < 50; ++t) {
            const GaloisElt g(rand_padic(p, 8, rng), rand_unit(p, 8, rng));
            const GaloisElt h(rand_padic(p, 8, rng), rand_unit(p, 8, rng));
            const BivarSeries f = random_series(F, 9, -2, rng);
            EXPECT_EQ(galois_act(g, galois_act(h, f)), galois_act(g * h, f));
        }
    }
}

TEST(BivarModel, LowMonomialsAreIndependent) {
    // Distinct monomials u^i eta^j, i + j <= 6, stay distinct nonzero coordinates;
    // a model-faithfulness note, nothing deeper.
    const FqField* F = gf(5, 1);
    std::set<BivarSeries::Key> seen;
    for (int i = 0; i <= 6; ++i)
        for (int j = 0; i + j <= 6; ++j) {
            const BivarSeries m = mono(F, 7, 1, i, j);
            ASSERT_EQ(m.terms().size(), 1u);
            EXPECT_TRUE(seen.insert(m.terms().begin()->first).second);
        }
    EXPECT_EQ(seen.size(), 28u);
}

TEST(TrivialRestriction, RejectsNonPPowerOrder) {
    const FqField* F = gf(3, 1);
    Matrix<Fq> A(1, 1, Fq(F, 2));
    EXPECT_THROW(trivial_restriction_module(A, 3, kW, 12), DomainError);
    EXPECT_THROW(trivial_restriction_module(three_cycle(F), 0, kW, 12), DomainError);
    auto M = trivial_restriction_module(three_cycle(F), 1, kW, 12);
    EXPECT_EQ(M.tau_order_log, 1);
    EXPECT_EQ(tau_order_witness(M, 3), 1);
    EXPECT_TRUE(phi_commutes(M));
}

TEST(CheckCommutation, ThreeCycleModule) {
    Rng rng(14);
    const FqField* F = gf(3, 1);
    const int W = 12;
    auto M = trivial_restriction_module(three_cycle(F), 1, kW, W);
    for (int t = 0; t < 50; ++t) {
        // chi in 1 + 3Z_3; G_inf acts on tau through that subgroup here
        const PadicInt chi = PadicInt(3, 10, 1) + PadicInt(3, 10, 3) * rand_padic(3, 10, rng);
        const GaloisElt g(PadicInt(3, 10, 0), chi);
        EXPECT_EQ(check_commutation(M, g, random_column(F, W, rng)), Verdict::True) << chi.str();
    }
}

TEST(CheckCommutation, MutatedModuleFails) {
    Rng rng(15);
    const FqField* F = gf(3, 1);
    const int W = 12;
    auto M = trivial_restriction_module(three_cycle(F), 1, kW, W);
    // T' = P (1 + eta (P - 1)) still has order 3 but is not fixed by G_inf
    const BivarSeries eta = zero_series(F, W).eta();
    const BMatrix I = BMatrix::identity(3, eta);
    const BMatrix P = M.T;
    BMatrix D = P - I;
    M.T = P * (I + D.map([&](const BivarSeries& x) { return x * eta; }));
    ASSERT_EQ(M.T.pow(3), I);
    EXPECT_EQ(tau_order_witness(M, 2), 1);
    EXPECT_FALSE(phi_commutes(M));
    const GaloisElt g(PadicInt(3, 10, 0), PadicInt(3, 10, 4));
    EXPECT_EQ(check_commutation(M, g, random_column(F, W, rng)), Verdict::False);
    // without an order witness nothing can be concluded
    M.tau_order_log = -1;
    EXPECT_EQ(check_commutation(M, g, random_column(F, W, rng)), Verdict::Indeterminate);
}

TEST(CheckCommutation, RejectsElementsOutsideGinf) {
    const FqField* F = gf(3, 1);
    auto M = trivial_restriction_module(three_cycle(F), 1, kW, 8);
    Rng rng(16);
    EXPECT_THROW(check_commutation(M, standard_tau(3, 10), random_column(F, 8, rng)), DomainError);
}
