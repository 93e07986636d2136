#include <gtest/gtest.h>

#include <phitau/series.hpp>

using namespace phitau;

namespace {

using ZS = TruncSeries<PadicInt>;
using QS = TruncSeries<Rational>;
using W = WittVector<Fq>;
using WS = TruncSeries<W>;

ZS zpoly(std::uint64_t p, int N, std::vector<std::int64_t> c, int prec) {
    std::vector<PadicInt> v;
    for (auto x : c) v.emplace_back(p, N, x);
    return ZS::from_coeffs(PadicInt(p, N, 0), v, 0, prec);
}

ZS random_zs(Rng& rng, std::uint64_t p, int N, int len, int prec) {
    std::vector<PadicInt> v;
    for (int i = 0; i < len; ++i) v.push_back(PadicInt::from_big(p, N, BigInt(rng.below(ipow(p, N)))));
    return ZS::from_coeffs(PadicInt(p, N, 0), v, 0, prec);
}

QS random_qs(Rng& rng, int len, int prec) {
    std::vector<Rational> v;
    for (int i = 0; i < len; ++i) v.push_back(Rational(rng.range(-20, 20), 1 + rng.below(9)));
    return QS::from_coeffs(Rational(0), v, 0, prec);
}

}  // namespace

TEST(NewtonPolygon, Examples) {
    auto a = newton_polygon_padic({-3, 1}, 3);
    ASSERT_EQ(a.segments.size(), 1u);
    EXPECT_EQ(a.segments[0].slope, 1);
    EXPECT_EQ(a.segments[0].length, 1);

    auto b = newton_polygon_padic({3, 3, 1}, 3);
    ASSERT_EQ(b.segments.size(), 1u);
    EXPECT_EQ(b.segments[0].slope, Rational(1, 2));
    EXPECT_EQ(b.segments[0].length, 2);

    auto c = newton_polygon_padic({0, -3, 1}, 3);
    EXPECT_EQ(c.zero_roots, 1);
    ASSERT_EQ(c.segments.size(), 1u);
    EXPECT_EQ(c.segments[0].slope, 1);

    // (x - 9)(x - 1)(x - 3): slopes 0, 1, 2
    auto d = newton_polygon_padic({-27, 39, -13, 1}, 3);
    ASSERT_EQ(d.segments.size(), 3u);
    EXPECT_EQ(d.segments[0].slope, 0);
    EXPECT_EQ(d.segments[1].slope, 1);
    EXPECT_EQ(d.segments[2].slope, 2);
}

TEST(NewtonPolygon, ProductMergesSlopes) {
    Rng rng(11);
    const std::uint64_t p = 3;
    for (int t = 0; t < 200; ++t) {
        auto rnd = [&] {
            std::vector<BigInt> f(1 + rng.below(4));
            for (auto& x : f) x = BigInt(rng.range(-200, 200));
            f.back() = 1 + rng.below(20) * 3;
            if (f.back() % 3 == 0) f.back() += 1;
            if (f[0] == 0) f[0] = 5;
            return f;
        };
        auto f = rnd(), g = rnd();
        std::vector<BigInt> fg(f.size() + g.size() - 1, 0);
        for (std::size_t i = 0; i < f.size(); ++i)
            for (std::size_t j = 0; j < g.size(); ++j) fg[i + j] += f[i] * g[j];
        std::map<Rational, int> expect, got;
        for (const auto* poly : {&f, &g}) {
            if (poly->size() < 2) continue;
            for (auto& s : newton_polygon_padic(*poly, p).segments) expect[s.slope] += s.length;
        }
        if (fg.size() >= 2)
            for (auto& s : newton_polygon_padic(fg, p).segments) got[s.slope] += s.length;
        EXPECT_EQ(expect, got);
    }
}

TEST(Eisenstein, Validation) {
    EXPECT_NO_THROW(EisensteinPoly(3, {3, 1}));
    EXPECT_NO_THROW(EisensteinPoly(3, {-6, 3, 1}));
    EXPECT_THROW(EisensteinPoly(3, {9, 1}), DomainError);
    EXPECT_THROW(EisensteinPoly(3, {3, 1, 1}), DomainError);
    EXPECT_THROW(EisensteinPoly(3, {3, 2}), DomainError);
    EXPECT_EQ(EisensteinPoly(3, {-6, 3, 1}).unit_c(), -2);
    EXPECT_EQ(EisensteinPoly(3, {-6, 3, 1}).str(), "u^2 + 3*u - 6");
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        auto E = EisensteinPoly::random(5, 1 + static_cast<int>(rng.below(3)), rng);
        EXPECT_EQ(vp(E.coeffs()[0], 5), 1);
        auto np = newton_polygon_padic(E.coeffs(), 5);
        ASSERT_EQ(np.segments.size(), 1u);
        EXPECT_EQ(np.segments[0].slope, Rational(1, E.degree()));
    }
}

TEST(Weierstrass, FactorsRecombine) {
    Rng rng(5);
    for (std::uint64_t p : {3u, 5u}) {
        for (int t = 0; t < 40; ++t) {
            const int N = 3, M = 24;
            ZS f = random_zs(rng, p, N, 12, M);
            // force unit degree d
            const int d = static_cast<int>(rng.below(4));
            std::vector<PadicInt> c;
            for (int k = 0; k < 12; ++k) {
                PadicInt a = f.coeff(k);
                if (k < d) a = a * static_cast<std::int64_t>(p);
                if (k == d && !a.is_unit()) a = a + 1;
                c.push_back(a);
            }
            f = ZS::from_coeffs(PadicInt(p, N, 0), c, 0, M);
            auto wf = weierstrass(f);
            EXPECT_EQ(wf.degree, d);
            ASSERT_EQ(wf.distinguished.end(), d + 1);
            for (int k = 0; k < d; ++k) EXPECT_FALSE(wf.distinguished.coeff(k).is_unit());
            EXPECT_TRUE(RingTraits<ZS>::is_unit(wf.unit.truncated(1)));
            EXPECT_EQ(wf.unit * wf.distinguished, f) << f.str();
            EXPECT_GE(wf.unit.precision(), M - N * d - d);
        }
    }
}

TEST(Weierstrass, KnownFactor) {
    // (1 + u)(u - 3) = u^2 - 2u - 3 over Z/27
    auto f = zpoly(3, 3, {-3, -2, 1}, 20);
    auto wf = weierstrass(f);
    EXPECT_EQ(wf.distinguished, zpoly(3, 3, {-3, 1}, kInfinity));
    EXPECT_EQ(wf.unit, zpoly(3, 3, {1, 1}, 20));
    EXPECT_THROW(weierstrass(zpoly(3, 3, {3, 6}, 20)), DomainError);
    EXPECT_THROW(weierstrass(zpoly(3, 3, {3, 6, 9, 1}, 10)), PrecisionError);
}

TEST(Weierstrass, OverWittCoefficients) {
    const FqField* F = gf(3, 2);
    Rng rng(9);
    for (int t = 0; t < 10; ++t) {
        auto E = EisensteinPoly::random(3, 2, rng);
        WS U = E.over_witt(F, 2).truncated(16);
        std::vector<W> cs;
        for (int k = 0; k < 6; ++k) cs.push_back(W(3, {Fq::random(F, rng), Fq::random(F, rng)}));
        cs[0] = W(3, {Fq::random_nonzero(F, rng), Fq::random(F, rng)});
        WS unit = WS::from_coeffs(W::zero(3, 2, Fq(F)), cs, 0, 16);
        auto wf = weierstrass(unit * U);
        EXPECT_EQ(wf.degree, 2);
        EXPECT_EQ(wf.distinguished, E.over_witt(F, 2));
    }
}

TEST(Weierstrass, DivisionWithRemainder) {
    Rng rng(13);
    const std::uint64_t p = 3;
    const int N = 3, M = 20;
    for (int t = 0; t < 50; ++t) {
        auto E = EisensteinPoly::random(p, 1 + static_cast<int>(rng.below(3)), rng);
        std::vector<PadicInt> c;
        for (auto& a : E.coeffs()) c.push_back(PadicInt::from_big(p, N, a));
        ZS P = ZS::from_coeffs(PadicInt(p, N, 0), c, 0, kInfinity);
        ZS g = random_zs(rng, p, N, 15, M);
        auto qr = weierstrass_divide(g, P);
        EXPECT_LT(qr.remainder.end(), E.degree() + 1);
        EXPECT_EQ(qr.quotient * P + qr.remainder, g);
    }
}

TEST(KisinLambda, FunctionalEquation) {
    for (std::vector<BigInt> e : {std::vector<BigInt>{3, 1}, {-3, 1}, {3, 0, 1}, {6, 3, 1}, {-3, 3, 1}}) {
        EisensteinPoly E(3, e);
        const int M = 30;
        auto kl = kisin_lambda(E, M);
        QS F = E.over_q().scaled(Rational(1) / Rational(e[0]));
        EXPECT_EQ((F * kl.lambda.frobenius(3)).truncated(M), kl.lambda) << E.str();
        EXPECT_EQ(kl.lambda.precision(), M);
        EXPECT_EQ(kl.lambda.coeff(0), 1);
    }
    // the factor count stops once d p^n reaches M; the cruder count
    // floor(log_p M) + 1 is an upper bound
    EXPECT_EQ(kisin_lambda(EisensteinPoly(3, {3, 0, 1}), 30).factors, 3);
    EXPECT_EQ(kisin_lambda(EisensteinPoly(3, {3, 1}), 30).factors, 4);
    for (int M : {5, 9, 10, 28, 81, 82})
        EXPECT_LE(kisin_lambda(EisensteinPoly(3, {3, 0, 1}), M).factors, floor_log(M, 3) + 1);
}

TEST(KisinLambda, NablaCommutesWithFrobenius) {
    Rng rng(17);
    const int M = 30;
    for (int e : {1, 2}) {
        for (int t = 0; t < 100; ++t) {
            auto E = EisensteinPoly::random(3, e, rng, 27);
            auto lambda = kisin_lambda(E, 3 * M).lambda;
            QS F = E.over_q().scaled(Rational(1) / Rational(E.coeffs()[0]));
            QS f = random_qs(rng, 8, M);
            QS lhs = n_nabla(f.frobenius(3), lambda);
            QS rhs = (F * n_nabla(f, lambda).frobenius(3)).scaled(Rational(3));
            EXPECT_EQ(lhs.truncated(M), rhs.truncated(M));
        }
    }
    EXPECT_EQ(n_nabla(QS::variable(Rational(0), 10), QS::one(Rational(0), 10)), QS::monomial(Rational(-1), 1, 10));
}

TEST(SNabla, Membership) {
    const std::uint64_t p = 3;
    // e = 1: strata start at u^0, u^1, u^4, u^13
    EXPECT_EQ(nabla_stratum(p, 1, 0), 0);
    EXPECT_EQ(nabla_stratum(p, 1, 3), 1);
    EXPECT_EQ(nabla_stratum(p, 1, 4), 2);
    EXPECT_EQ(nabla_stratum(p, 1, 13), 3);
    EXPECT_EQ(nabla_stratum(p, 2, 7), 1);
    EXPECT_EQ(nabla_stratum(p, 2, 8), 2);
    auto mono = [](Rational c, int k) { return QS::monomial(c, k, 20); };
    EXPECT_TRUE(s_nabla_member(mono(Rational(1, 3), 0), p, 1));
    EXPECT_FALSE(s_nabla_member(mono(Rational(1, 9), 0), p, 1));
    EXPECT_TRUE(s_nabla_member(mono(Rational(1, 9), 1), p, 1));
    EXPECT_FALSE(s_nabla_member(mono(Rational(1, 27), 3), p, 1));
    EXPECT_TRUE(s_nabla_member(mono(Rational(1, 27), 4), p, 1));
    EXPECT_FALSE(s_nabla_member(mono(Rational(1), -1), p, 1));
    // lambda lies in the ring it is built for
    for (int e : {1, 2}) {
        EisensteinPoly E(p, e == 1 ? std::vector<BigInt>{3, 1} : std::vector<BigInt>{3, 0, 1});
        EXPECT_TRUE(s_nabla_member(kisin_lambda(E, 40).lambda, p, e));
    }
}

// ---------------------------------------------------------------------------

TEST(PerfSeries, RingLaws) {
    const PerfRing* R = perf_ring(gf(3, 2), 2, 2, 8);
    Rng rng(21);
    for (int t = 0; t < 100; ++t) {
        PerfSeries a = PerfSeries::random(R, rng, rng.below(R->L * 2), 4);
        PerfSeries b = PerfSeries::random(R, rng, rng.below(R->L * 2), 4);
        PerfSeries c = PerfSeries::random(R, rng, 0, 4);
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ((a + b).frobenius(), a.frobenius() + b.frobenius());
        EXPECT_EQ((a * b).frobenius(), a.frobenius() * b.frobenius());
        EXPECT_EQ(a.frobenius().pth_root(), a.truncated(a.frobenius().pth_root().precision_num()));
        PerfSeries ai = a.inverse();
        EXPECT_EQ(a * ai, PerfSeries::one(R)) << a.str();
        EXPECT_EQ(a.pow(3), a.frobenius());
    }
    EXPECT_THROW(PerfSeries::monomial(R, Fq::one(R->F), Rational(1, 5)), LatticeTooCoarse);
    EXPECT_THROW(PerfSeries::monomial(R, Fq::one(R->F), std::int64_t{1}).pth_root(), LatticeTooCoarse);
}

TEST(PerfSeries, EmbeddingOfSubfield) {
    const FqField* F9 = gf(3, 2);
    const FqField* F81 = gf(3, 4);
    const auto& emb = embedding(F9, F81);
    for (const Fq& a : all_elements(F9))
        for (const Fq& b : all_elements(F9)) {
            EXPECT_EQ(emb(a * b), emb(a) * emb(b));
            EXPECT_EQ(emb(a + b), emb(a) + emb(b));
        }
    for (const Fq& a : all_elements(F9)) EXPECT_EQ(emb.preimage(emb(a)), a);
    EXPECT_FALSE(emb.preimage(Fq::gen(F81)).has_value());
}

TEST(PerfSeries, FrobeniusLinearEquations) {
    const FqField* F = gf(3, 2);
    for (const Fq& a : all_elements(F)) {
        auto line = frobenius_eigenline(a);
        for (const Fq& y : line) EXPECT_EQ(y.frobenius(), a * y);
        // y^{p-1} = a is solvable exactly when a is a (p-1)-th power
        bool is_power = false;
        for (const Fq& y : all_elements(F))
            if (!y.is_zero() && y.pow(std::int64_t{2}) == a) is_power = true;
        if (!a.is_zero()) {
            EXPECT_EQ(!line.empty(), is_power) << a.str();
        }
        for (const Fq& b : all_elements(F)) {
            auto y = solve_frobenius_affine(a, b);
            if (y) {
                EXPECT_EQ(y->frobenius() - a * *y, b);
            }
        }
    }
}

TEST(WittDivide, RoundTrip) {
    const PerfRing* R = perf_ring(gf(3, 2), 2, 3, 14);
    Rng rng(31);
    for (int t = 0; t < 30; ++t) {
        WittPerf z(3, {PerfSeries::random(R, rng, R->L / 2 + rng.below(R->L), 3), PerfSeries::random(R, rng, rng.below(R->L), 3)});
        WittPerf y(3, {PerfSeries::random(R, rng, R->L / 2 + rng.below(R->L), 3), PerfSeries::random(R, rng, R->L / 2 + rng.below(R->L), 3)});
        WittPerf x = z * y;
        WittPerf q = witt_divide(x, z);
        EXPECT_EQ(q[0], y[0]);
        EXPECT_EQ(q[1], y[1]);
        EXPECT_EQ(z * q, x);
    }
}

// ---------------------------------------------------------------------------

namespace {

WS wpoly(const FqField* F, int n, std::vector<std::vector<std::int64_t>> c) {
    std::vector<W> v;
    for (auto& coords : c) {
        std::vector<Fq> x;
        for (int i = 0; i < n; ++i) x.emplace_back(F, i < static_cast<int>(coords.size()) ? coords[i] : 0);
        v.emplace_back(F->p, x);
    }
    return WS::from_coeffs(W::zero(F->p, n, Fq(F)), v, 0, kInfinity);
}

void expect_fixed(const FrobeniusFixedResult& r) {
    WittPerf lhs = r.V.frobenius();
    WittPerf rhs = r.U_image * r.V;
    for (int i = 0; i < r.V.length(); ++i) {
        EXPECT_TRUE(lhs[i] == rhs[i]) << "coordinate " << i << ": " << lhs[i].str() << " vs " << rhs[i].str();
        EXPECT_FALSE(r.V[0].is_zero());
    }
}

}  // namespace

TEST(FrobeniusFixed, TameExampleIsExactToTheCap) {
    const FqField* F = gf(3, 1);
    WS U = wpoly(F, 2, {{0}, {1}, {1}});  // u + u^2
    auto r = solve_frobenius_fixed(U, {1, 2, 3, 8});
    expect_fixed(r);
    EXPECT_EQ(r.V[0].valuation(), Rational(1, 2));
    EXPECT_FALSE(r.lattice_limited);
    EXPECT_GE(r.precision[1], 4);
    // V_0^{p-1} = U mod p
    EXPECT_EQ(r.V[0].pow(2), r.U_image[0]);
}

TEST(FrobeniusFixed, ScaledSolutionsRemainSolutions) {
    const FqField* F = gf(3, 1);
    WS U = wpoly(F, 2, {{0}, {1}, {1}});
    auto r = solve_frobenius_fixed(U, {1, 2, 3, 8});
    const PerfRing* R = r.V[0].ring();
    for (std::int64_t a : {1, 2}) {
        WittPerf t = WittPerf::teichmuller(3, 2, PerfSeries::constant(R, Fq(R->F, a)));
        FrobeniusFixedResult s = r;
        s.V = t * r.V;
        expect_fixed(s);
    }
}

TEST(FrobeniusFixed, RandomEisenstein) {
    Rng rng(41);
    for (auto [p, n] : {std::pair<std::uint32_t, int>{3, 2}, {5, 1}}) {
        for (int t = 0; t < 20; ++t) {
            auto E = EisensteinPoly::random(p, 1 + static_cast<int>(rng.below(2)), rng);
            const FqField* F = gf(p, 1);
            FrobeniusFixedParams prm{1, 0, 3, 12};
            FrobeniusFixedResult r;
            try {
                r = solve_frobenius_fixed(E.over_witt(F, n), prm);
            } catch (const ExtensionTooSmall&) {
                prm.s = 2;
                r = solve_frobenius_fixed(E.over_witt(F, n), prm);
            }
            expect_fixed(r);
            EXPECT_EQ(r.V[0].valuation(), Rational(E.degree(), p - 1));
        }
    }
}

TEST(FrobeniusFixed, ResidueFieldTooSmall) {
    // x^2 = 2 has no root in F_3
    const FqField* F = gf(3, 1);
    WS U = wpoly(F, 1, {{0}, {2}});
    EXPECT_THROW(solve_frobenius_fixed(U, {1, 2, 2, 6}), ExtensionTooSmall);
    EXPECT_NO_THROW(solve_frobenius_fixed(U, {2, 2, 2, 6}));
    // u^1 needs exponent 1/2
    EXPECT_THROW(solve_frobenius_fixed(wpoly(F, 1, {{0}, {1}}), {1, 1, 2, 6}), LatticeTooCoarse);
}

TEST(FrobeniusFixed, DivisibilityWitness) {
    // p = 3, n = 2, h = 1: z = U V has v(z_0) = 3/2; anything with both
    // coordinates above 9/2 is divisible by z, and generic x below 7/2 is not.
    const FqField* F = gf(3, 1);
    WS U = wpoly(F, 2, {{0}, {1}, {1}});
    auto r = solve_frobenius_fixed(U, {1, 2, 3, 12});
    const WittPerf z = r.U_image * r.V;
    EXPECT_EQ(z[0].valuation(), Rational(3, 2));
    const PerfRing* R = z[0].ring();
    Rng rng(43);
    const std::int64_t hi = R->numerator_of(Rational(9, 2));
    const std::int64_t lo = R->numerator_of(Rational(7, 2));
    int pos = 0, neg = 0;
    for (int t = 0; t < 100; ++t) {
        WittPerf x(3, {PerfSeries::random(R, rng, hi + 1 + rng.below(R->L), 3), PerfSeries::random(R, rng, hi + 1 + rng.below(R->L), 3)});
        try {
            WittPerf y = witt_divide(x, z);
            EXPECT_EQ(z * y, x);
            ++pos;
        } catch (const Error& e) {
            ADD_FAILURE() << e.what();
        }
        WittPerf c(3, {PerfSeries::random(R, rng, rng.below(lo), 3), PerfSeries::random(R, rng, rng.below(lo), 3)});
        EXPECT_THROW(witt_divide(c, z), NotDivisible);
        ++neg;
    }
    EXPECT_EQ(pos, 100);
    EXPECT_EQ(neg, 100);
}

TEST(FrobeniusFixed, WildCoordinateStopsAtLatticeDepth) {
    // For E = u + 3 the second coordinate is a sum of u^{(3^k - 1)/(2 3^{k-1})}
    // terms: every extra lattice level certifies one more, approaching 3/2.
    EisensteinPoly E(3, {3, 1});
    Rational last = 0;
    for (int jmax : {2, 3, 4}) {
        auto r = solve_frobenius_fixed(E.over_witt(gf(3, 1), 2), {2, 0, jmax, 12});
        expect_fixed(r);
        EXPECT_TRUE(r.lattice_limited);
        EXPECT_EQ(r.precision[1], Rational(3, 2) - Rational(1, 2 * static_cast<int>(ipow(3, jmax))));
        EXPECT_GT(r.precision[1], last);
        last = r.precision[1];
    }
}
