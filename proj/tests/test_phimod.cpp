#include <gtest/gtest.h>

#include <phitau/phimod.hpp>

using namespace phitau;

namespace {

Laurent mono(const FqField* F, int n, std::int64_t c, int k, int M) {
    return Laurent::monomial(witt_int(F, n, c), k, M);
}

LMatrix diag(const std::vector<Laurent>& d) {
    LMatrix A(static_cast<int>(d.size()), static_cast<int>(d.size()), Laurent(d[0].zero_coeff(), d[0].precision()));
    for (std::size_t i = 0; i < d.size(); ++i) A(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return A;
}

// U1 diag(u^a_i) U2 with random unit matrices
PhiModule random_height_module(const FqField* F, int n, const std::vector<int>& exps, int M, Rng& rng) {
    const int d = static_cast<int>(exps.size());
    std::vector<Laurent> dg;
    for (int a : exps) dg.push_back(mono(F, n, 1, a, M));
    LMatrix G = random_unit_matrix(F, n, d, 4, M, rng) * diag(dg) * random_unit_matrix(F, n, d, 4, M, rng);
    return {F, n, G};
}

}  // namespace

TEST(PhiModule, Etale) {
    const FqField* F = gf(3, 1);
    EXPECT_TRUE(PhiModule(F, 1, diag({mono(F, 1, 1, 0, 10), mono(F, 1, 1, 0, 10)})).is_etale());
    EXPECT_TRUE(PhiModule(F, 1, diag({mono(F, 1, 1, 1, 10), mono(F, 1, 1, 0, 10)})).is_etale());
    EXPECT_FALSE(PhiModule(F, 2, diag({mono(F, 2, 3, 0, 10), mono(F, 2, 1, 1, 10)})).is_etale());
    EXPECT_TRUE(PhiModule(F, 2, diag({mono(F, 2, 2, -2, 10)})).is_etale());
}

TEST(PhiModule, BaseChangeIsConsistent) {
    const FqField* F = gf(3, 2);
    Rng rng(3);
    for (int t = 0; t < 10; ++t) {
        PhiModule M(F, 2, random_unit_matrix(F, 2, 2, 3, 12, rng));
        LMatrix B = random_unit_matrix(F, 2, 2, 3, 12, rng);
        PhiModule MB = M.base_change(B);
        // phi(B X) computed in both bases
        LMatrix X = random_unit_matrix(F, 2, 2, 3, 12, rng);
        EXPECT_TRUE(B * MB.apply_phi(X) == M.apply_phi(B * X));
    }
}

TEST(PhiLattice, Stabilization) {
    const FqField* F = gf(3, 1);
    // phi(u^k e) = u^{3k - 1} e needs 3k - 1 >= k
    auto s = stabilize_lattice(PhiModule(F, 1, diag({mono(F, 1, 1, -1, 20)})));
    EXPECT_EQ(s.k, 1);
    EXPECT_EQ(s.lattice.matrix()(0, 0).valuation(), 1);
    EXPECT_EQ(stabilize_lattice(PhiModule(F, 1, diag({mono(F, 1, 2, 3, 20)}))).k, 0);
    EXPECT_THROW(PhiLattice::standard(PhiModule(F, 1, diag({mono(F, 1, 1, -1, 20)}))), DomainError);

    Rng rng(5);
    for (std::uint32_t p : {3u, 5u}) {
        const FqField* Fp = gf(p, 1);
        for (int t = 0; t < 20; ++t) {
            const int a = -static_cast<int>(rng.below(9));
            LMatrix G = random_unit_matrix(Fp, 1, 2, 3, 24, rng);
            G(0, 1) = G(0, 1) + mono(Fp, 1, 1, a, 24);
            PhiModule M(Fp, 1, G);
            auto st = stabilize_lattice(M);
            EXPECT_GE(min_valuation(st.lattice.matrix()), 0);
            if (st.k > 0) {
                LMatrix B = LMatrix::identity(2, laurent_zero(Fp, 1, kInfinity));
                for (int i = 0; i < 2; ++i) B(i, i) = mono(Fp, 1, 1, st.k - 1, kInfinity);
                EXPECT_THROW(PhiLattice(M, B), DomainError);
            }
        }
    }
}

TEST(UHeight, Examples) {
    const FqField* F = gf(3, 2);
    Rng rng(7);
    auto L0 = PhiLattice::standard(PhiModule(F, 1, random_unit_matrix(F, 1, 2, 4, 20, rng)));
    EXPECT_EQ(u_height(L0).height, 0);
    EXPECT_TRUE(u_height(L0).certified);
    for (int t = 0; t < 5; ++t) {
        auto L = PhiLattice::standard(random_height_module(F, 1, {1, 3}, 20, rng));
        auto h = u_height(L);
        EXPECT_TRUE(h.certified);
        EXPECT_EQ(h.height, 3);
    }
    for (int a = 0; a < 6; ++a) {
        auto L = PhiLattice::standard(random_height_module(F, 1, {a}, 20, rng));
        EXPECT_EQ(u_height(L).height, a);
    }
    // pivot at or past half the precision is not certified
    auto Lbig = PhiLattice::standard(random_height_module(F, 1, {0, 9}, 16, rng));
    EXPECT_FALSE(u_height(Lbig).certified);
}

TEST(UHeight, MatchesBruteForceOracle) {
    Rng rng(11);
    for (std::uint32_t q : {3u, 5u}) {
        const FqField* F = gf(q, 1);
        for (int t = 0; t < 25; ++t) {
            const int d = 1 + static_cast<int>(rng.below(2));
            std::vector<int> exps;
            for (int i = 0; i < d; ++i) exps.push_back(static_cast<int>(rng.below(5)));
            auto L = PhiLattice::standard(random_height_module(F, 1, exps, 24, rng));
            auto h = u_height(L);
            ASSERT_TRUE(h.certified);
            EXPECT_EQ(h.height, *std::max_element(exps.begin(), exps.end()));
            EXPECT_EQ(u_height_bruteforce(L, 6, 20), std::optional<int>(h.height));
        }
    }
}

TEST(UHeight, TensorIsSubadditive) {
    Rng rng(13);
    const FqField* F = gf(3, 1);
    for (int t = 0; t < 15; ++t) {
        auto L1 = PhiLattice::standard(random_height_module(F, 1, {static_cast<int>(rng.below(3))}, 24, rng));
        auto L2 = PhiLattice::standard(random_height_module(F, 1, {static_cast<int>(rng.below(3)), static_cast<int>(rng.below(3))}, 24, rng));
        auto h = u_height(tensor(L1, L2));
        ASSERT_TRUE(h.certified);
        EXPECT_LE(h.height, u_height(L1).height + u_height(L2).height);
    }
}

TEST(HeightDivides, AgreesWithUHeightModP) {
    Rng rng(17);
    const FqField* F = gf(3, 1);
    for (int t = 0; t < 20; ++t) {
        const int d = 1 + static_cast<int>(rng.below(2));
        std::vector<int> exps;
        for (int i = 0; i < d; ++i) exps.push_back(static_cast<int>(rng.below(4)));
        auto L = PhiLattice::standard(random_height_module(F, 1, exps, 30, rng));
        const int h = u_height(L).height;
        for (int k = 0; k <= 5; ++k)
            EXPECT_EQ(height_divides(L, mono(F, 1, 1, k, 30)), k >= h ? Verdict::True : Verdict::False) << "h=" << h << " k=" << k;
    }
}

TEST(HeightDivides, AdjugateIdentity) {
    Rng rng(19);
    const FqField* F = gf(3, 1);
    for (int n : {1, 2}) {
        for (int t = 0; t < 10; ++t) {
            auto L = PhiLattice::standard(random_height_module(F, n, {static_cast<int>(rng.below(3)), 1}, 30, rng));
            const Laurent D = det(L.matrix());
            EXPECT_EQ(height_divides(L, D), Verdict::True);
        }
    }
}

TEST(Cyclotomic, Heights) {
    const FqField* F = gf(3, 1);
    EisensteinPoly E1(3, {3, 1}), E2(3, {-3, 3, 1});
    for (const auto& E : {E1, E2}) {
        auto L0 = PhiLattice::standard(cyclotomic_module(E, 0, F, 1, 24));
        EXPECT_EQ(u_height(L0).height, 0);
        auto L1 = PhiLattice::standard(cyclotomic_module(E, 1, F, 1, 24));
        EXPECT_EQ(u_height(L1).height, E.degree());
        for (int n : {1, 2}) {
            auto Ln = PhiLattice::standard(cyclotomic_module(E, 1, F, n, 24));
            EXPECT_EQ(height_divides(Ln, eisenstein_series(E, F, n, 24)), Verdict::True);
        }
        Rng rng(1);
        auto L3 = PhiLattice::standard(random_height_module(F, 1, {3}, 24, rng));
        EXPECT_EQ(height_divides(L3, mono(F, 1, 1, 2, 24)), Verdict::False);
    }
}

TEST(Cyclotomic, NegativeExponentHasNoCoordinateLattice) {
    // G = c E^{-1}: the coordinate basis is not phi-stable; the least stable
    // u^k lattice has k = ceil(e/(p-1)) and u-height (p-1)k - e.
    for (std::uint32_t p : {3u, 5u}) {
        const FqField* F = gf(p, 1);
        for (int e : {1, 2, 3}) {
            std::vector<BigInt> c(e + 1, 0);
            c[0] = p;
            c[e] = 1;
            EisensteinPoly E(p, c);
            PhiModule M = cyclotomic_module(E, -1, F, 1, 24);
            EXPECT_TRUE(M.is_etale());
            EXPECT_THROW(PhiLattice::standard(M), DomainError);
            auto st = stabilize_lattice(M);
            const int k = (e + static_cast<int>(p) - 2) / static_cast<int>(p - 1);
            EXPECT_EQ(st.k, k);
            EXPECT_EQ(u_height(st.lattice).height, static_cast<int>(p - 1) * k - e);
        }
    }
}

TEST(LatticeContains, Examples) {
    const FqField* F = gf(3, 1);
    Rng rng(23);
    EisensteinPoly E(3, {3, 1});
    for (int n : {1, 2}) {
        PhiModule M(F, n, random_unit_matrix(F, n, 2, 3, 20, rng));
        auto L = PhiLattice::standard(M);
        LMatrix I = LMatrix::identity(2, laurent_zero(F, n, kInfinity));
        EXPECT_EQ(lattice_contains(L, L, I), Verdict::True);
        LMatrix EB = I;
        for (int i = 0; i < 2; ++i) EB(i, i) = E.over_witt(F, n).truncated(20);
        if (n > 1) {
            // phi(E)/E is not integral once p^2 != 0
            EXPECT_THROW(PhiLattice(M, EB), DomainError);
            continue;
        }
        // mod p, E L = u^e L is a lattice of finite E-height not containing L
        PhiLattice LE(M, EB);
        EXPECT_EQ(lattice_contains(L, LE, I), Verdict::False);
        EXPECT_EQ(lattice_contains(LE, L, I), Verdict::True);
    }
}

TEST(LatticeContains, UnitRelatedRankOneLattices) {
    // Rank-one lattices differing by a unit of S: every phi-equivariant
    // scalar map sends one into the other.
    Rng rng(29);
    const FqField* F = gf(3, 2);
    for (int t = 0; t < 50; ++t) {
        const int n = 1 + static_cast<int>(rng.below(2));
        auto E = EisensteinPoly::random(3, 1 + static_cast<int>(rng.below(2)), rng);
        PhiModule M = cyclotomic_module(E, static_cast<int>(rng.below(3)), F, n, 20);
        auto L1 = PhiLattice::standard(M);
        LMatrix B = random_unit_matrix(F, n, 1, 4, 20, rng);
        PhiLattice L2(M, B);
        LMatrix id = LMatrix::identity(1, laurent_zero(F, n, kInfinity));
        EXPECT_EQ(lattice_contains(L1, L2, id), Verdict::True);
        EXPECT_EQ(lattice_contains(L2, L1, id), Verdict::True);
    }
}

TEST(LatticeContains, TorsionLatticesNeedNotCoincide) {
    // mod p, u L is another phi-stable lattice (of finite height) strictly
    // inside L; uniqueness of lattices only holds over S itself.
    const FqField* F = gf(3, 1);
    PhiModule M = cyclotomic_module(EisensteinPoly(3, {3, 1}), 1, F, 1, 20);
    auto L = PhiLattice::standard(M);
    PhiLattice uL(M, LMatrix(1, 1, mono(F, 1, 1, 1, kInfinity)));
    EXPECT_EQ(u_height(uL).height, 3);
    LMatrix id = LMatrix::identity(1, laurent_zero(F, 1, kInfinity));
    EXPECT_EQ(lattice_contains(L, uL, id), Verdict::False);
}
