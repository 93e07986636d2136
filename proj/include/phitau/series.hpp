#pragma once

#include <optional>

#include "perf_series.hpp"

namespace phitau {

/**
 * Eisenstein polynomial u^e + a_{e-1} u^{e-1} + ... + a_0 over Z_p with
 * p | a_i and a_0 = p c, c a unit. Integer coefficients, low degree first.
 */
class EisensteinPoly {
public:
    EisensteinPoly(std::uint64_t p, std::vector<BigInt> coeffs) : p_(p), a_(std::move(coeffs)) {
        require_odd_prime(p);
        if (a_.size() < 2 || a_.back() != 1) throw DomainError("Eisenstein polynomial must be monic of degree >= 1");
        for (std::size_t i = 0; i + 1 < a_.size(); ++i)
            if (a_[i] % p != 0) throw DomainError("non-leading coefficients must be divisible by p");
        if (a_[0] % (BigInt(p) * p) == 0) throw DomainError("constant term must have p-adic valuation exactly 1");
    }

    // A random one of degree e with coefficients in [0, bound).
    static EisensteinPoly random(std::uint64_t p, int e, Rng& rng, std::uint64_t bound = 0) {
        if (bound == 0) bound = p * p * p;
        std::vector<BigInt> a(e + 1);
        a[e] = 1;
        for (int i = 1; i < e; ++i) a[i] = BigInt(p) * rng.below(bound / p);
        do {
            a[0] = BigInt(p) * (1 + rng.below(bound / p - 1));
        } while (a[0] % (BigInt(p) * p) == 0);
        if (rng.coin()) a[0] = -a[0];
        return {p, a};
    }

    std::uint64_t prime() const { return p_; }
    int degree() const { return static_cast<int>(a_.size()) - 1; }
    const std::vector<BigInt>& coeffs() const { return a_; }
    // c = E(0)/p
    BigInt unit_c() const { return a_[0] / p_; }

    TruncSeries<Rational> over_q() const {
        std::vector<Rational> c(a_.begin(), a_.end());
        return TruncSeries<Rational>::from_coeffs(Rational(0), c, 0, kInfinity);
    }
    // As an exact polynomial over W_n(F) (F any field of characteristic p).
    TruncSeries<WittVector<Fq>> over_witt(const FqField* F, int n) const {
        const WittVector<Fq> like = WittVector<Fq>::zero(p_, n, Fq(F));
        std::vector<WittVector<Fq>> c;
        for (const BigInt& x : a_) c.push_back(RingTraits<WittVector<Fq>>::from_big(like, x));
        return TruncSeries<WittVector<Fq>>::from_coeffs(like, c, 0, kInfinity);
    }

    std::string str() const {
        std::string s;
        for (int i = degree(); i >= 0; --i) {
            if (a_[i] == 0) continue;
            if (!s.empty()) s += a_[i] < 0 ? " - " : " + ";
            else if (a_[i] < 0) s += "-";
            BigInt m = a_[i] < 0 ? BigInt(-a_[i]) : a_[i];
            if (i == 0 || m != 1) s += m.str();
            if (i > 0) s += (m != 1 ? "*u" : "u") + (i > 1 ? "^" + std::to_string(i) : std::string());
        }
        return s;
    }

private:
    std::uint64_t p_;
    std::vector<BigInt> a_;
};

// ---------------------------------------------------------------------------
// Newton polygons

struct NewtonSegment {
    Rational slope;  // valuation of the roots on this segment
    int length;
};

struct NewtonPolygon {
    std::vector<NewtonSegment> segments;  // slopes nondecreasing
    int zero_roots = 0;                   // roots at 0 (index of the lowest nonzero coefficient)
};

/**
 * Lower convex hull of the points (i, v_i) for the nonzero coefficients.
 * Reported slopes are root valuations, the negatives of the hull slopes, so
 * x - p has the single slope 1.
 */
inline NewtonPolygon newton_polygon(std::vector<std::pair<int, std::optional<Rational>>> pts) {
    std::vector<std::pair<int, Rational>> q;
    for (auto& [i, v] : pts)
        if (v) q.push_back({i, *v});
    if (q.empty()) throw DomainError("Newton polygon of the zero polynomial");
    std::sort(q.begin(), q.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 1; k < q.size(); ++k)
        if (q[k].first == q[k - 1].first) throw DomainError("repeated index in Newton polygon input");
    std::vector<std::pair<int, Rational>> hull;
    for (const auto& pt : q) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            // drop b unless it lies strictly below segment a -> pt
            Rational cross = (b.second - a.second) * (pt.first - a.first) - (pt.second - a.second) * (b.first - a.first);
            if (cross >= 0) hull.pop_back();
            else break;
        }
        hull.push_back(pt);
    }
    NewtonPolygon np;
    np.zero_roots = q.front().first;
    for (std::size_t k = hull.size() - 1; k >= 1; --k) {
        const int len = hull[k].first - hull[k - 1].first;
        np.segments.push_back({-(hull[k].second - hull[k - 1].second) / len, len});
    }
    return np;
}

// p-adic Newton polygon of an integer polynomial, low degree first.
inline NewtonPolygon newton_polygon_padic(const std::vector<BigInt>& coeffs, std::uint64_t p) {
    std::vector<std::pair<int, std::optional<Rational>>> pts;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        pts.push_back({static_cast<int>(i), coeffs[i] == 0 ? std::nullopt : std::optional<Rational>(vp(coeffs[i], p))});
    return newton_polygon(pts);
}

// ---------------------------------------------------------------------------
// Weierstrass preparation over a p-adically complete local coefficient ring

template <class C>
struct WeierstrassFactors {
    TruncSeries<C> unit;
    TruncSeries<C> distinguished;  // u^d + (terms of degree < d divisible by p)
    int degree;
};

/**
 * f = unit * P with P distinguished of degree d, d the first index with a
 * unit coefficient. With f = A + u^d B (deg A < d, A = 0 mod p) the inverse
 * unit q solves q = B^{-1}(1 - high_d(qA)); then P = u^d + low_d(qA).
 * Each pass gains a factor p and loses d in u-adic precision, so q is known
 * to precision(f) - (n + 1) d where p^n = 0 in C.
 */
template <class C>
WeierstrassFactors<C> weierstrass(const TruncSeries<C>& f) {
    using S = TruncSeries<C>;
    if (f.valuation() < 0) throw DomainError("weierstrass: not a power series");
    int d;
    try {
        d = f.unit_degree();
    } catch (const DomainError&) {
        throw DomainError("weierstrass: f is divisible by p at the known precision");
    }
    const C& z = f.zero_coeff();
    const S A = f.low(d);
    if (A.is_zero()) {
        return {f.high(d), S::monomial(RingTraits<C>::one(z), d), d};
    }
    const S Binv = f.high(d).inverse();
    const int n = RingTraits<C>::p_nilpotency(z);
    const int work = Binv.precision();
    const int prec = detail::sat_add(work, -n * d);
    if (prec < d) throw PrecisionError("weierstrass: precision too small for the degree");
    // Fixed point on exact polynomials truncated at work. Truncation errors
    // sit at u^work and move down d places per factor p, so they are gone
    // below work - n d.
    S q = Binv.with_precision(kInfinity);
    for (int it = 0;; ++it) {
        S next = (Binv * (S::one(z) - (q * A).high(d))).truncated(work).with_precision(kInfinity);
        if (next == q) break;
        q = std::move(next);
        if (it > 10000) throw Error("weierstrass: iteration did not stabilize");
    }
    S P = S::monomial(RingTraits<C>::one(z), d) + (q * A).low(d);
    q = q.with_precision(prec);
    return {q.inverse(), P, d};
}

template <class C>
struct DivisionResult {
    TruncSeries<C> quotient;
    TruncSeries<C> remainder;  // exact polynomial of degree < d
};

/**
 * g = Q P + R with deg R < d for a distinguished P = u^d + r. The quotient
 * satisfies Q = high_d(g - Q r); R = low_d(g - Q r). Throws PrecisionError
 * when the low d coefficients of Q are not certified.
 */
template <class C>
DivisionResult<C> weierstrass_divide(const TruncSeries<C>& g, const TruncSeries<C>& P) {
    using S = TruncSeries<C>;
    const C& z = g.zero_coeff();
    const int d = P.end() - 1;
    if (d < 0 || P.precision() != kInfinity || !(P.coeff(d) == RingTraits<C>::one(z)))
        throw DomainError("weierstrass_divide: divisor must be an exact monic polynomial");
    const S r = P.low(d);
    const int n = RingTraits<C>::p_nilpotency(z);
    const int work = detail::sat_add(g.precision(), -d);
    const int prec = detail::sat_add(work, -n * d);
    if (prec != kInfinity && prec < d) throw PrecisionError("weierstrass_divide: quotient not certified below u^d");
    S Q = g.high(d).with_precision(kInfinity);
    for (int it = 0;; ++it) {
        S next = (g - Q * r).high(d).truncated(work).with_precision(kInfinity);
        if (next == Q) break;
        Q = std::move(next);
        if (it > 10000) throw Error("weierstrass_divide: iteration did not stabilize");
    }
    S R = (g - Q * r).low(d);
    return {Q.with_precision(prec), R};
}

// ---------------------------------------------------------------------------
// lambda and N_nabla on the base ring (Z_p = W(F_p) coefficients, exactly over Q)

struct KisinLambda {
    TruncSeries<Rational> lambda;
    int factors;
};

/**
 * lambda = prod_{n >= 0} phi^n(E(u)/E(0)) modulo u^M. phi^n(E/E(0)) - 1 has
 * valuation d p^n with d the least positive exponent of E, so the factors
 * with d p^n >= M are 1 mod u^M.
 */
inline KisinLambda kisin_lambda(const EisensteinPoly& E, int M) {
    using S = TruncSeries<Rational>;
    const std::uint64_t p = E.prime();
    const S F = E.over_q().scaled(Rational(1) / Rational(E.coeffs()[0])).truncated(M);
    int dmin = 0;
    for (int k = 1; k < F.end(); ++k)
        if (F.coeff(k) != 0) {
            dmin = k;
            break;
        }
    S lambda = S::one(Rational(0), M);
    int count = 0;
    S factor = F;
    for (BigInt pn = 1; pn * dmin < M; pn *= p) {
        lambda = (lambda * factor).truncated(M);
        factor = factor.frobenius(p).truncated(M);
        ++count;
    }
    return {lambda, count};
}

// N_nabla(f) = -u lambda f'. The derivative loses the top coefficient and the
// factor u restores it, so the precision is that of f and lambda.
inline TruncSeries<Rational> n_nabla(const TruncSeries<Rational>& f, const TruncSeries<Rational>& lambda) {
    return -(lambda * f.derivative().shift(1));
}

// Largest n with e (p^n - 1)/(p - 1) <= k, for k >= 0.
inline int nabla_stratum(std::uint64_t p, int e, std::int64_t k) {
    int n = 0;
    BigInt next = e;  // e (p^{n+1} - 1)/(p - 1)
    BigInt pn = p;
    while (next <= k) {
        ++n;
        next += BigInt(e) * pn;
        pn *= p;
    }
    return n;
}

/**
 * Membership in sum_n P_n(u)/p^{n+1} u^{e(p^n-1)/(p-1)}: the coefficient of
 * u^k may have p in its denominator at most n(k)+1 times.
 */
inline bool s_nabla_member(const TruncSeries<Rational>& f, std::uint64_t p, int e) {
    for (int k = f.valuation(); k < f.end(); ++k) {
        const Rational c = f.coeff_or_zero(k);
        if (c == 0) continue;
        if (k < 0) return false;
        const int den = -vp(c, p);
        if (den > nabla_stratum(p, e, k) + 1) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Frobenius-fixed vectors: V with phi(V) = U V in W_n(R)

/**
 * The image of U in W_n(R) under u -> [u]: sum_j a_j [u]^j, where a [t] has
 * coordinates a_i t^{p^i}. Coefficients of U are embedded into the residue
 * field of R. A finite u-adic precision M of U is carried to every
 * coordinate as precision M.
 */
inline WittPerf witt_image(const PerfRing* R, const TruncSeries<WittVector<Fq>>& U) {
    const std::uint64_t p = R->p;
    const int n = U.zero_coeff().length();
    const FqEmbedding& emb = embedding(U.zero_coeff()[0].field(), R->F);
    WittPerf acc = WittPerf::zero(p, n, PerfSeries(R));
    for (int j = U.valuation(); j < U.end(); ++j) {
        const WittVector<Fq> a = U.coeff_or_zero(j);
        if (a.is_zero()) continue;
        if (j < 0) throw DomainError("witt_image: negative exponent");
        std::vector<PerfSeries> c;
        std::int64_t e = j * R->L;
        for (int i = 0; i < n; ++i) {
            c.push_back(PerfSeries::monomial(R, emb(a[i]), e));
            e *= static_cast<std::int64_t>(p);
        }
        acc = acc + WittPerf(p, c);
    }
    if (U.precision() != kInfinity) {
        std::vector<PerfSeries> c;
        for (int i = 0; i < n; ++i) c.push_back(acc[i].truncated(static_cast<std::int64_t>(U.precision()) * R->L));
        acc = WittPerf(p, c);
    }
    return acc;
}

struct FrobeniusFixedParams {
    int s = 1;             // residue field of R is F_{q^s}
    std::int64_t D = 0;    // exponent lattice denominator; 0 means p - 1
    int jmax = 3;          // p-power depth of the lattice
    int cap = 12;          // u-exponents at or above cap are not stored
};

struct FrobeniusFixedResult {
    WittPerf V;
    WittPerf U_image;
    std::vector<Rational> precision;  // certified precision of each coordinate of V
    bool lattice_limited = false;     // some coordinate stopped at the lattice depth
};

struct TwistedASResult {
    PerfSeries x;
    Rational residual_precision;
    bool lattice_limited = false;
};

/**
 * One solution of x^p - c x = B in the model of R. The two sides balance at
 * v(x) = t* = v(c)/(p-1), i.e. at valuation b* = p t*. Residual terms above
 * b* are absorbed by x -= r/c, terms at b* by a root of z^p - c_0 z = b in
 * the residue field, terms below b* by p-th roots. If the residual is zero
 * below pi, some solution agrees with x below pi/p (pi <= b*) or pi - v(c).
 */
inline TwistedASResult solve_twisted_artin_schreier(const PerfSeries& c, const PerfSeries& B) {
    const PerfRing* R = c.ring();
    const std::int64_t p = static_cast<std::int64_t>(R->p);
    if (c.is_zero()) throw DomainError("twisted Artin-Schreier: zero twist");
    const Rational gamma = c.valuation();
    const Rational tstar = gamma / (p - 1), bstar = tstar * p;
    PerfSeries x(R);
    bool limited = false;
    Rational pi;
    Rational last_beta = -1;
    for (int it = 0;; ++it) {
        const PerfSeries r = B - (x.frobenius() - c * x);
        if (r.is_zero()) {
            pi = r.precision();
            break;
        }
        const Rational beta = r.valuation();
        if (beta <= last_beta || it > 2000) {
            // no progress: the residual is only known to vanish below beta
            pi = beta;
            break;
        }
        last_beta = beta;
        PerfSeries dx(R);
        if (beta > bstar) {
            PerfSeries hi(R);
            for (const auto& [k, a] : r.terms())
                if (R->to_rational(k) > bstar) hi = hi + PerfSeries::monomial(R, a, k);
            dx = -((hi.truncated(r.precision_num())) / c);
        } else if (beta == bstar) {
            auto z = solve_frobenius_affine(c.leading_coeff(), r.leading_coeff());
            if (!z) throw ExtensionTooSmall("no root of z^p - c z = b in " + R->F->name());
            dx = PerfSeries::monomial(R, *z, tstar);
        } else {
            std::vector<PerfSeries::Term> roots;
            for (const auto& [k, a] : r.terms()) {
                if (R->to_rational(k) >= bstar) break;
                if (k % p != 0) break;
                roots.push_back({k / p, a.pth_root()});
            }
            if (roots.empty()) {
                limited = true;
                pi = beta;
                break;
            }
            dx = PerfSeries::from_terms(R, roots, R->cap);
        }
        x = x + dx;
    }
    const Rational xprec = pi <= bstar ? Rational(pi / p) : Rational(pi - gamma);
    const Rational scaled = xprec * R->L;
    // rounded down so that Frobenius images do not overstate the precision
    const std::int64_t num = static_cast<std::int64_t>(numerator(floor_rat(scaled)));
    return {x.truncated(num), pi, limited};
}

/**
 * All x in R with x^p = a x, for a = c u^h (1 + g) nonzero: 0 and
 * z u^{h/(p-1)} (1 + g)^{1/(p-1)} with z^{p-1} = c. The unit part is the
 * product of (1 + g^{p^k})^{d_k} over the p-adic digits d_k of 1/(p-1),
 * i.e. p-1 followed by p-2 repeated. Sorted by the coefficient z in
 * enumeration order, so 0 comes first.
 */
inline std::vector<PerfSeries> rank1_solutions(const PerfSeries& a) {
    const PerfRing* R = a.ring();
    const std::uint64_t p = R->p;
    if (a.is_zero()) throw DomainError("rank1_solutions: zero coefficient");
    const Rational h = a.valuation();
    const Fq c0 = a.leading_coeff();
    const Rational t0 = h / (p - 1);
    R->numerator_of(t0);
    auto line = frobenius_eigenline(c0);
    if (line.empty()) throw ExtensionTooSmall("x^{p-1} = " + c0.str() + " has no root in " + R->F->name());
    const PerfSeries g = a.shift(-R->numerator_of(h)).scaled(c0.inverse()) - PerfSeries::one(R);
    PerfSeries w = PerfSeries::one(R);
    PerfSeries gk = g;  // g^{p^k}
    for (int k = 0; !gk.is_zero(); ++k) {
        const std::uint64_t digit = k == 0 ? p - 1 : p - 2;
        w = w * (PerfSeries::one(R) + gk).pow(digit);
        gk = gk.frobenius();
    }
    std::vector<Fq> zetas;
    for (std::uint32_t m = 0; m < p; ++m) zetas.push_back(line.front().scaled(m));
    std::sort(zetas.begin(), zetas.end());
    std::vector<PerfSeries> out;
    for (const Fq& z : zetas) out.push_back(PerfSeries::monomial(R, z, t0) * w);
    return out;
}

/**
 * V in W_n(R) with phi(V) = U V, built coordinate by coordinate. V_0 is
 * the least nonzero solution of x^p = U_0 x (U_0 = U mod p), see
 * rank1_solutions; coordinate i then solves
 * x^p - U_0^{p^i} x = (U (V_0, .., V_{i-1}, 0, ..))_i.
 */
inline FrobeniusFixedResult solve_frobenius_fixed(const TruncSeries<WittVector<Fq>>& U, FrobeniusFixedParams prm = {}) {
    const WittVector<Fq>& z0 = U.zero_coeff();
    const std::uint64_t p = z0.prime();
    const int n = z0.length();
    const FqField* Fq0 = z0[0].field();
    const FqField* Fbig = gf(static_cast<std::uint32_t>(p), Fq0->n * prm.s);
    const PerfRing* R = perf_ring(Fbig, prm.D ? prm.D : static_cast<std::int64_t>(p - 1), prm.jmax, prm.cap);

    const WittPerf Ubar = witt_image(R, U);
    const PerfSeries& u0 = Ubar[0];
    if (u0.is_zero()) throw DomainError("solve_frobenius_fixed: U is divisible by p");

    std::vector<PerfSeries> V(n, PerfSeries(R));
    V[0] = rank1_solutions(u0)[1];

    FrobeniusFixedResult out;
    out.precision.push_back(V[0].precision());
    for (int i = 1; i < n; ++i) {
        const PerfSeries B = (Ubar * WittPerf(p, V))[i];
        const PerfSeries c = u0.pow(ipow(p, i));
        TwistedASResult as = solve_twisted_artin_schreier(c, B);
        V[i] = as.x;
        out.precision.push_back(as.x.precision());
        out.lattice_limited = out.lattice_limited || as.lattice_limited;
    }
    out.V = WittPerf(p, V);
    out.U_image = Ubar;
    return out;
}

}  // namespace phitau
