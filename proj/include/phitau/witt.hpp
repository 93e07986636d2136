#pragma once

#include <map>
#include <memory>
#include <mutex>

#include "ring.hpp"

namespace phitau {

// Polynomial with integer coefficients in a fixed number of variables.
class IntPoly {
public:
    using Monomial = std::vector<std::uint16_t>;

    explicit IntPoly(int nvars = 0) : nvars_(nvars) {}

    static IntPoly variable(int nvars, int i) {
        IntPoly f(nvars);
        Monomial m(nvars, 0);
        m[i] = 1;
        f.terms_[m] = 1;
        return f;
    }
    static IntPoly constant(int nvars, const BigInt& c) {
        IntPoly f(nvars);
        if (c != 0) f.terms_[Monomial(nvars, 0)] = c;
        return f;
    }

    int nvars() const { return nvars_; }
    const std::map<Monomial, BigInt>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    friend IntPoly operator+(IntPoly a, const IntPoly& b) {
        for (const auto& [m, c] : b.terms_) a.add_term(m, c);
        return a;
    }
    friend IntPoly operator-(IntPoly a, const IntPoly& b) {
        for (const auto& [m, c] : b.terms_) a.add_term(m, -c);
        return a;
    }
    friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
        IntPoly r(a.nvars_);
        Monomial m(a.nvars_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                for (int i = 0; i < a.nvars_; ++i) m[i] = static_cast<std::uint16_t>(ma[i] + mb[i]);
                r.add_term(m, ca * cb);
            }
        return r;
    }
    IntPoly scaled(const BigInt& k) const {
        IntPoly r(nvars_);
        if (k == 0) return r;
        r.terms_ = terms_;
        for (auto& [m, c] : r.terms_) c *= k;
        return r;
    }
    // Exact division of every coefficient; throws if some coefficient is not divisible.
    IntPoly divided(const BigInt& k) const {
        IntPoly r = *this;
        for (auto& [m, c] : r.terms_) {
            if (c % k != 0) throw Error("IntPoly: inexact division");
            c /= k;
        }
        return r;
    }
    IntPoly pow(std::uint64_t e) const {
        IntPoly r = constant(nvars_, 1), b = *this;
        while (e) {
            if (e & 1) r = r * b;
            e >>= 1;
            if (e) b = b * b;
        }
        return r;
    }

    BigInt coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? BigInt(0) : it->second;
    }

    // Evaluate at ring elements; integer coefficients enter through from_big,
    // so over a ring of characteristic p the terms with p | coefficient drop.
    template <class A>
    A eval(const std::vector<A>& vals) const {
        using Tr = RingTraits<A>;
        const A& like = vals.front();
        A acc = Tr::zero(like);
        std::vector<std::map<int, A>> cache(nvars_);
        auto power = [&](int i, int e) -> A {
            auto& c = cache[i];
            auto it = c.find(e);
            if (it != c.end()) return it->second;
            A r = Tr::one(like), b = vals[i];
            for (int k = e; k; k >>= 1) {
                if (k & 1) r = r * b;
                if (k > 1) b = b * b;
            }
            c.emplace(e, r);
            return r;
        };
        for (const auto& [m, c] : terms_) {
            A coef = Tr::from_big(like, c);
            if (Tr::is_zero(coef)) continue;
            A t = coef;
            for (int i = 0; i < nvars_ && !Tr::is_zero(t); ++i)
                if (m[i]) t = t * power(i, m[i]);
            acc = acc + t;
        }
        return acc;
    }

private:
    void add_term(const Monomial& m, const BigInt& c) {
        if (c == 0) return;
        auto [it, fresh] = terms_.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    int nvars_;
    std::map<Monomial, BigInt> terms_;
};

/**
 * Addition and multiplication polynomials S_i, P_i of length-n p-typical
 * Witt vectors, in variables x_0..x_{n-1}, y_0..y_{n-1}. They are obtained
 * by lifting the ghost identities to Z[x, y] and dividing exactly.
 */
class WittLawTable {
public:
    WittLawTable(std::uint64_t p, int n) : p_(p), n_(n) {
        require_odd_prime(p);
        if (n < 1 || n > 6) throw DomainError("Witt length must be in [1, 6]");
        const int nv = 2 * n;
        std::vector<IntPoly> X, Y;
        for (int i = 0; i < n; ++i) {
            X.push_back(IntPoly::variable(nv, i));
            Y.push_back(IntPoly::variable(nv, n + i));
        }
        // powS[i][j] = S_i^{p^j}, likewise for P
        std::vector<std::vector<IntPoly>> powS, powP;
        for (int k = 0; k < n; ++k) {
            IntPoly wx = ghost_poly(X, k), wy = ghost_poly(Y, k);
            IntPoly s = wx + wy, m = wx * wy;
            BigInt pi = 1;
            for (int i = 0; i < k; ++i) {
                while (static_cast<int>(powS[i].size()) <= k - i) {
                    powS[i].push_back(powS[i].back().pow(p));
                    powP[i].push_back(powP[i].back().pow(p));
                }
                s = s - powS[i][k - i].scaled(pi);
                m = m - powP[i][k - i].scaled(pi);
                pi *= p;
            }
            S_.push_back(s.divided(pi));
            P_.push_back(m.divided(pi));
            powS.push_back({S_.back()});
            powP.push_back({P_.back()});
        }
    }

    // Shared immutable table for (p, n).
    static std::shared_ptr<const WittLawTable> get(std::uint64_t p, int n) {
        static std::mutex mu;
        static std::map<std::pair<std::uint64_t, int>, std::shared_ptr<const WittLawTable>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto& slot = cache[{p, n}];
        if (!slot) slot = std::make_shared<const WittLawTable>(p, n);
        return slot;
    }

    std::uint64_t prime() const { return p_; }
    int length() const { return n_; }
    const IntPoly& sum(int i) const { return S_.at(i); }
    const IntPoly& product(int i) const { return P_.at(i); }

    // w_k = sum_{i <= k} p^i X_i^{p^{k-i}}
    IntPoly ghost_poly(const std::vector<IntPoly>& X, int k) const {
        IntPoly w(X.front().nvars());
        BigInt pi = 1;
        for (int i = 0; i <= k; ++i) {
            w = w + X[i].pow(ipow(p_, k - i)).scaled(pi);
            pi *= p_;
        }
        return w;
    }

private:
    std::uint64_t p_;
    int n_;
    std::vector<IntPoly> S_, P_;
};

/**
 * A length-n Witt vector over a coefficient ring A. Used with A of
 * characteristic p (Fq, series over Fq), where Frobenius acts coordinatewise
 * and -x is coordinatewise because p is odd.
 */
template <class A>
class WittVector {
public:
    using Tr = RingTraits<A>;

    WittVector() = default;
    WittVector(std::uint64_t p, std::vector<A> coords) : p_(p), x_(std::move(coords)) {
        if (x_.empty()) throw DomainError("Witt vector of length 0");
        table_ = WittLawTable::get(p_, length());
    }

    static WittVector zero(std::uint64_t p, int n, const A& like) { return {p, std::vector<A>(n, Tr::zero(like))}; }
    static WittVector one(std::uint64_t p, int n, const A& like) { return teichmuller(p, n, Tr::one(like)); }
    static WittVector teichmuller(std::uint64_t p, int n, const A& a) {
        std::vector<A> c(n, Tr::zero(a));
        c[0] = a;
        return {p, c};
    }
    // Image of an integer under Z -> W_n(A).
    static WittVector from_int(std::uint64_t p, int n, const A& like, std::int64_t k) {
        WittVector one_ = one(p, n, like), acc = zero(p, n, like);
        WittVector b = k < 0 ? -one_ : one_;
        for (std::uint64_t m = static_cast<std::uint64_t>(k < 0 ? -k : k); m; m >>= 1) {
            if (m & 1) acc = acc + b;
            b = b + b;
        }
        return acc;
    }

    std::uint64_t prime() const { return p_; }
    int length() const { return static_cast<int>(x_.size()); }
    const A& operator[](int i) const { return x_.at(i); }
    const std::vector<A>& coords() const { return x_; }

    bool is_zero() const {
        for (const A& a : x_)
            if (!Tr::is_zero(a)) return false;
        return true;
    }
    // Index of the first nonzero coordinate: the p-adic valuation when A is a perfect field.
    int valuation() const {
        for (int i = 0; i < length(); ++i)
            if (!Tr::is_zero(x_[i])) return i;
        return kInfinity;
    }

    friend WittVector operator+(const WittVector& a, const WittVector& b) { return a.apply(b, true); }
    friend WittVector operator*(const WittVector& a, const WittVector& b) { return a.apply(b, false); }
    WittVector operator-() const {
        WittVector r = *this;
        for (A& a : r.x_) a = Tr::zero(a) - a;
        return r;
    }
    friend WittVector operator-(const WittVector& a, const WittVector& b) { return a + (-b); }
    friend bool operator==(const WittVector& a, const WittVector& b) {
        if (a.length() != b.length()) return false;
        for (int i = 0; i < a.length(); ++i)
            if (!(a.x_[i] == b.x_[i])) return false;
        return true;
    }
    friend bool operator!=(const WittVector& a, const WittVector& b) { return !(a == b); }

    WittVector frobenius() const {
        WittVector r = *this;
        for (A& a : r.x_) a = Tr::frobenius(a);
        return r;
    }
    WittVector verschiebung() const {
        std::vector<A> c(length(), Tr::zero(x_[0]));
        for (int i = 1; i < length(); ++i) c[i] = x_[i - 1];
        return {p_, c};
    }
    // Coordinatewise map into another coefficient ring (a ring morphism A -> B).
    template <class F>
    auto map(F f) const -> WittVector<decltype(f(std::declval<A>()))> {
        using B = decltype(f(std::declval<A>()));
        std::vector<B> c;
        for (const A& a : x_) c.push_back(f(a));
        return {p_, c};
    }
    WittVector truncated(int m) const {
        return {p_, std::vector<A>(x_.begin(), x_.begin() + m)};
    }

    // Inverse of a unit (x_0 invertible) by Newton iteration y <- y(2 - xy).
    WittVector inverse() const {
        if (Tr::is_zero(x_[0])) throw DomainError("Witt vector is not a unit");
        WittVector y = teichmuller(p_, length(), Tr::inverse(x_[0]));
        const WittVector two = from_int(p_, length(), x_[0], 2);
        for (int done = 1; done < length(); done *= 2) y = y * (two - *this * y);
        return y;
    }

    std::string str() const {
        std::string s = "(";
        for (int i = 0; i < length(); ++i) s += (i ? ", " : "") + Tr::str(x_[i]);
        return s + ")";
    }

private:
    WittVector apply(const WittVector& b, bool add) const {
        if (p_ != b.p_ || length() != b.length()) throw DomainError("Witt vectors of different shape");
        std::vector<A> vals = x_;
        vals.insert(vals.end(), b.x_.begin(), b.x_.end());
        std::vector<A> c;
        c.reserve(length());
        for (int i = 0; i < length(); ++i) c.push_back((add ? table_->sum(i) : table_->product(i)).eval(vals));
        return {p_, c, table_};
    }
    WittVector(std::uint64_t p, std::vector<A> c, std::shared_ptr<const WittLawTable> t)
        : p_(p), x_(std::move(c)), table_(std::move(t)) {}

    std::uint64_t p_ = 0;
    std::vector<A> x_;
    std::shared_ptr<const WittLawTable> table_;
};

template <class A>
struct RingTraits<WittVector<A>> {
    using W = WittVector<A>;
    static W zero(const W& like) { return W::zero(like.prime(), like.length(), like[0]); }
    static W one(const W& like) { return W::one(like.prime(), like.length(), like[0]); }
    static W from_int(const W& like, std::int64_t k) { return W::from_int(like.prime(), like.length(), like[0], k); }
    static W from_big(const W& like, const BigInt& k) {
        BigInt m = mod_floor(k, bigpow(BigInt(like.prime()), like.length()));
        return W::from_int(like.prime(), like.length(), like[0], static_cast<std::int64_t>(m));
    }
    static bool is_zero(const W& x) { return x.is_zero(); }
    static bool is_unit(const W& x) { return !RingTraits<A>::is_zero(x[0]); }
    static int p_nilpotency(const W& x) { return x.length(); }
    static W frobenius(const W& x) { return x.frobenius(); }
    static W inverse(const W& x) { return x.inverse(); }
    static std::string str(const W& x) { return x.str(); }
};

// The Teichmuller representative a^{p^{n-1}} of a mod p in Z/p^n.
inline BigInt teichmuller_zmod(std::uint64_t p, int n, std::uint64_t a) {
    BigInt mod = bigpow(BigInt(p), n);
    return powm(BigInt(a % p), bigpow(BigInt(p), n - 1), mod);
}

// W_n(F_p) -> Z/p^n, x |-> sum p^i [x_i].
inline BigInt to_zmod(const WittVector<Fq>& x) {
    if (x[0].degree() != 1) throw DomainError("to_zmod needs coefficients in F_p");
    const std::uint64_t p = x.prime();
    const int n = x.length();
    const BigInt mod = bigpow(BigInt(p), n);
    BigInt acc = 0, pi = 1;
    for (int i = 0; i < n; ++i) {
        acc += pi * teichmuller_zmod(p, n, x[i].coeff(0));
        pi *= p;
    }
    return mod_floor(acc, mod);
}

inline WittVector<Fq> from_zmod(std::uint64_t p, int n, BigInt z) {
    const FqField* F = gf(static_cast<std::uint32_t>(p), 1);
    const BigInt mod = bigpow(BigInt(p), n);
    z = mod_floor(z, mod);
    std::vector<Fq> c;
    for (int i = 0; i < n; ++i) {
        std::uint64_t d = static_cast<std::uint64_t>(mod_floor(z, BigInt(p)));
        c.emplace_back(F, static_cast<std::int64_t>(d));
        z = (z - teichmuller_zmod(p, n, d)) / p;
    }
    return {p, c};
}

}  // namespace phitau
