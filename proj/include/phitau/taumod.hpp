#pragma once

#include <map>

#include "gskel.hpp"
#include "linalg.hpp"
#include "trunc_series.hpp"

namespace phitau {

// Truncation of k((u, eta)): monomials u^i eta^j of weight wu i + we j at or
// above the precision are dropped.
struct BivarWeights {
    int wu = 1;
    int we = 1;
};

/**
 * Series sum c_{ij} u^i eta^j over F_q, i bounded below and j >= 0, with
 * absolute weighted precision: every monomial of weight below precision()
 * is known.
 */
class BivarSeries {
public:
    using Key = std::pair<int, int>;

    BivarSeries() = default;
    BivarSeries(const FqField* F, BivarWeights w, int prec) : F_(F), w_(w), prec_(prec) {}

    static BivarSeries monomial(const FqField* F, BivarWeights w, int prec, const Fq& c, int i, int j) {
        if (j < 0) throw DomainError("negative eta exponent");
        BivarSeries f(F, w, prec);
        f.add_term(i, j, c);
        return f;
    }
    static BivarSeries constant(const FqField* F, BivarWeights w, int prec, const Fq& c) { return monomial(F, w, prec, c, 0, 0); }
    static BivarSeries one(const FqField* F, BivarWeights w, int prec) { return constant(F, w, prec, Fq::one(F)); }
    BivarSeries zero_like() const { return {F_, w_, prec_}; }
    BivarSeries one_like() const { return one(F_, w_, prec_); }
    BivarSeries u() const { return monomial(F_, w_, prec_, Fq::one(F_), 1, 0); }
    BivarSeries eta() const { return monomial(F_, w_, prec_, Fq::one(F_), 0, 1); }

    // A series in u alone.
    static BivarSeries from_u_series(const TruncSeries<Fq>& f, BivarWeights w, int prec) {
        BivarSeries r(f.zero_coeff().field(), w, f.precision() == kInfinity ? prec : std::min(prec, w.wu * f.precision()));
        for (int k = f.valuation(); k < f.end(); ++k) r.add_term(k, 0, f.coeff_or_zero(k));
        return r;
    }

    const FqField* field() const { return F_; }
    BivarWeights weights() const { return w_; }
    int precision() const { return prec_; }
    int weight(int i, int j) const { return w_.wu * i + w_.we * j; }
    bool is_zero() const { return t_.empty(); }
    const std::map<Key, Fq>& terms() const { return t_; }
    int valuation() const {
        int v = prec_;
        for (const auto& [k, c] : t_) v = std::min(v, weight(k.first, k.second));
        return v;
    }
    Fq coeff(int i, int j) const {
        if (weight(i, j) >= prec_) throw PrecisionError("coefficient beyond the precision");
        auto it = t_.find({i, j});
        return it == t_.end() ? Fq(F_) : it->second;
    }
    int max_eta_degree() const { return prec_ <= 0 ? 0 : (prec_ - 1) / w_.we; }

    BivarSeries truncated(int prec) const {
        BivarSeries r(F_, w_, std::min(prec_, prec));
        for (const auto& [k, c] : t_) r.add_term(k.first, k.second, c);
        return r;
    }

    friend BivarSeries operator+(const BivarSeries& a, const BivarSeries& b) { return combine(a, b, false); }
    friend BivarSeries operator-(const BivarSeries& a, const BivarSeries& b) { return combine(a, b, true); }
    BivarSeries operator-() const { return zero_like() - *this; }

    friend BivarSeries operator*(const BivarSeries& a, const BivarSeries& b) {
        check(a, b);
        const int prec = std::min(sat(a.prec_, b.valuation()), sat(b.prec_, a.valuation()));
        BivarSeries r(a.F_, a.w_, prec);
        for (const auto& [ka, ca] : a.t_)
            for (const auto& [kb, cb] : b.t_) r.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
        return r;
    }

    BivarSeries scaled(const Fq& c) const {
        BivarSeries r(F_, w_, prec_);
        for (const auto& [k, x] : t_) r.add_term(k.first, k.second, x * c);
        return r;
    }

    BivarSeries pow(std::uint64_t e) const {
        BivarSeries r = one_like(), b = *this;
        while (e) {
            if (e & 1) r = r * b;
            e >>= 1;
            if (e) b = b * b;
        }
        return r;
    }

    // Coefficientwise Frobenius with u -> u^p, eta -> eta^p.
    BivarSeries frobenius() const {
        const int p = static_cast<int>(F_->p);
        BivarSeries r(F_, w_, prec_ == kInfinity ? kInfinity : prec_ * p);
        for (const auto& [k, c] : t_) r.add_term(k.first * p, k.second * p, c.frobenius());
        return r;
    }

    friend bool operator==(const BivarSeries& a, const BivarSeries& b) {
        check(a, b);
        const int P = std::min(a.prec_, b.prec_);
        return a.truncated(P).t_ == b.truncated(P).t_;
    }
    friend bool operator!=(const BivarSeries& a, const BivarSeries& b) { return !(a == b); }

    std::string str() const {
        std::string s;
        for (const auto& [k, c] : t_) {
            if (!s.empty()) s += " + ";
            s += c.str();
            if (k.first) s += "*u^" + std::to_string(k.first);
            if (k.second) s += "*eta^" + std::to_string(k.second);
        }
        return (s.empty() ? "0" : s) + " + O(" + std::to_string(prec_) + ")";
    }

private:
    static int sat(int a, int b) { return (a == kInfinity || b == kInfinity) ? kInfinity : a + b; }
    static void check(const BivarSeries& a, const BivarSeries& b) {
        if (a.F_ != b.F_ || a.w_.wu != b.w_.wu || a.w_.we != b.w_.we) throw DomainError("bivariate series from different models");
    }
    static BivarSeries combine(const BivarSeries& a, const BivarSeries& b, bool sub) {
        check(a, b);
        BivarSeries r(a.F_, a.w_, std::min(a.prec_, b.prec_));
        for (const auto& [k, c] : a.t_) r.add_term(k.first, k.second, c);
        for (const auto& [k, c] : b.t_) r.add_term(k.first, k.second, sub ? -c : c);
        return r;
    }
    void add_term(int i, int j, const Fq& c) {
        if (c.is_zero() || weight(i, j) >= prec_) return;
        auto [it, fresh] = t_.emplace(Key{i, j}, c);
        if (!fresh) {
            it->second = it->second + c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    const FqField* F_ = nullptr;
    BivarWeights w_{};
    int prec_ = 0;
    std::map<Key, Fq> t_;
};

template <>
struct RingTraits<BivarSeries> {
    static BivarSeries zero(const BivarSeries& like) { return like.zero_like(); }
    static BivarSeries one(const BivarSeries& like) { return like.one_like(); }
    static BivarSeries from_int(const BivarSeries& like, std::int64_t k) { return like.one_like().scaled(Fq(like.field(), k)); }
    static bool is_zero(const BivarSeries& x) { return x.is_zero(); }
    static std::string str(const BivarSeries& x) { return x.str(); }
};

/**
 * (1 + eta)^z for z in Z_p, as the product of (1 + eta^{p^k})^{z_k} over the
 * base-p digits of z. Needs the digits of z up to the largest p^k below the
 * eta-degree bound, hence z known mod p^{floor(log_p J) + 1}.
 */
inline BivarSeries binom_power(const PadicInt& z, const BivarSeries& like) {
    const std::uint64_t p = like.field()->p;
    if (z.prime() != p) throw DomainError("binom_power: prime mismatch");
    const int J = like.max_eta_degree();
    const int need = J >= 1 ? floor_log(static_cast<std::uint64_t>(J), p) + 1 : 0;
    if (z.precision() < need)
        throw PrecisionError("binom_power: exponent known mod p^" + std::to_string(z.precision()) + ", need p^" + std::to_string(need));
    BivarSeries r = like.one_like();
    const auto digits = z.digits();
    BivarSeries e = like.eta();  // eta^{p^k}
    for (int k = 0; k < need; ++k) {
        if (digits[k]) r = r * (like.one_like() + e).pow(digits[k]);
        e = e.pow(p);
    }
    return r;
}

/**
 * The action of g = (c, chi): u -> u (1 + eta)^c, eta -> (1 + eta)^chi - 1.
 * It is a left action: galois_act(g, galois_act(h, f)) = galois_act(g h, f)
 * for the law of GaloisElt.
 */
inline BivarSeries galois_act(const GaloisElt& g, const BivarSeries& f) {
    const FqField* F = f.field();
    if (g.prime() != F->p) throw DomainError("galois_act: prime mismatch");
    const BivarWeights w = f.weights();
    const int P = f.precision();
    if (f.is_zero()) return f;
    // g does not lower weights, but products with u^i for i < 0 need extra room.
    const int imin = f.terms().begin()->first.first;
    const int Pw = P + std::max(0, -w.wu * imin);
    const BivarSeries work(F, w, Pw);
    const BivarSeries eta_img = binom_power(g.chi, work) - work.one_like();
    std::map<int, BivarSeries> u_img;  // u^i -> u^i (1 + eta)^{c i}
    std::vector<BivarSeries> eta_pow{work.one_like()};
    BivarSeries r = work;
    for (const auto& [k, c] : f.terms()) {
        const auto [i, j] = k;
        auto it = u_img.find(i);
        if (it == u_img.end()) {
            const BivarSeries ui = BivarSeries::monomial(F, w, kInfinity, Fq::one(F), i, 0);
            const BivarSeries room(F, w, Pw - w.wu * i);
            it = u_img.emplace(i, ui * binom_power(g.c * static_cast<std::int64_t>(i), room)).first;
        }
        while (static_cast<int>(eta_pow.size()) <= j) eta_pow.push_back(eta_pow.back() * eta_img);
        r = r + (it->second * eta_pow[j]).scaled(c);
    }
    return r.truncated(P);
}

inline GaloisElt standard_tau(std::uint64_t p, int N) { return {PadicInt(p, N, 1), PadicInt(p, N, 1)}; }

using BMatrix = Matrix<BivarSeries>;

inline BMatrix act(const GaloisElt& g, const BMatrix& A) {
    return A.map([&](const BivarSeries& x) { return galois_act(g, x); });
}

/**
 * A mod p (phi, tau)-module in coordinates: phi_M(X) = G phi(X) and
 * tau_M(X) = T tau(X) on column vectors, G over k((u)) and T over k((u, eta)).
 */
struct PhiTauModP {
    BMatrix G;
    BMatrix T;
    GaloisElt tau;
    int tau_order_log = -1;  // k with tau_M^{p^k} = 1 on the basis, when known

    int rank() const { return G.rows(); }
    const FqField* field() const { return G(0, 0).field(); }
};

// Product T tau(T) ... tau^{r-1}(T): the matrix of tau_M^r on the basis.
inline BMatrix tau_power_matrix(const PhiTauModP& M, std::uint64_t r) {
    BMatrix acc = BMatrix::identity(M.rank(), M.T(0, 0));
    BMatrix cur = M.T;  // tau^k(T)
    for (std::uint64_t k = 0; k < r; ++k) {
        acc = acc * cur;
        cur = act(M.tau, cur);
    }
    return acc;
}

// Least k <= kmax with tau_M^{p^k} = identity on the basis, or -1.
inline int tau_order_witness(const PhiTauModP& M, int kmax) {
    const BMatrix I = BMatrix::identity(M.rank(), M.T(0, 0));
    std::uint64_t pk = 1;
    for (int k = 0; k <= kmax; ++k) {
        if (tau_power_matrix(M, pk) == I) return k;
        pk *= M.field()->p;
    }
    return -1;
}

/**
 * Example 1: a representation of G_K trivial on G_inf, given by the matrix
 * of tau over F_p. Then G = 1 and tau_M = tau (x) tau_T. The matrix must
 * have order dividing p^s.
 */
inline PhiTauModP trivial_restriction_module(const Matrix<Fq>& tauT, int s, BivarWeights w, int prec, int N = 20) {
    const FqField* F = tauT(0, 0).field();
    const std::uint64_t p = F->p;
    const int d = tauT.rows();
    const Matrix<Fq> I = Matrix<Fq>::identity(d, tauT(0, 0));
    if (!(tauT.pow(ipow(p, s)) == I)) throw DomainError("tau matrix does not have order dividing p^" + std::to_string(s));
    const BivarSeries z(F, w, prec);
    PhiTauModP M{BMatrix::identity(d, z), tauT.map([&](const Fq& c) { return BivarSeries::constant(F, w, prec, c); }),
                 standard_tau(p, N)};
    int k = 0;
    while (!(tauT.pow(ipow(p, k)) == I)) ++k;
    M.tau_order_log = k;
    return M;
}

// tau_M phi_M = phi_M tau_M on the basis: T tau(G) = G phi(T).
inline bool phi_commutes(const PhiTauModP& M) {
    auto frob = [](const BMatrix& A) { return A.map([](const BivarSeries& x) { return x.frobenius(); }); };
    return M.T * act(M.tau, M.G) == M.G * frob(M.T);
}

/**
 * (g (x) id) tau_M(x) against tau_M^{chi_tau(g)}(x) for g in G_inf and x
 * with coordinates X in k((u)). The left side is g(T) g(tau(X)); the right
 * side is (matrix of tau_M^a) tau^a(X), where the matrix only depends on a
 * mod p^k for a witnessed order p^k. Indeterminate without a witness.
 */
inline Verdict check_commutation(const PhiTauModP& M, const GaloisElt& g, const BMatrix& X) {
    if (!g.in_Ginf()) throw DomainError("check_commutation: g must lie in G_inf");
    if (M.tau_order_log < 0) return Verdict::Indeterminate;
    const PadicInt a = chi_tau(g.chi, M.tau.chi);
    const std::uint64_t pk = ipow(M.field()->p, M.tau_order_log);
    if (a.precision() < M.tau_order_log) return Verdict::Indeterminate;
    const std::uint64_t r = static_cast<std::uint64_t>(mod_floor(BigInt(a.residue()), BigInt(pk)));
    try {
        const BMatrix lhs = act(g, M.T) * act(g, act(M.tau, X));
        const BMatrix rhs = tau_power_matrix(M, r) * act(pow(M.tau, a), X);
        return lhs == rhs ? Verdict::True : Verdict::False;
    } catch (const PrecisionError&) {
        return Verdict::Indeterminate;
    }
}

}  // namespace phitau
