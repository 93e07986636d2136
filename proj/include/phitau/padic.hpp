#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <string>

#include "common.hpp"

namespace phitau {

namespace detail {

using u128 = unsigned __int128;

// Arithmetic in Z/m for m < 2^63.
struct ModArith {
    std::uint64_t m;

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t s = a + b;
        return s >= m ? s - m : s;
    }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + m - b; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        return static_cast<std::uint64_t>((static_cast<u128>(a) * b) % m);
    }
    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
        std::uint64_t r = 1 % m;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    // Inverse of a unit by extended Euclid.
    std::uint64_t inv(std::uint64_t a) const {
        std::int64_t t = 0, nt = 1;
        std::int64_t r = static_cast<std::int64_t>(m), nr = static_cast<std::int64_t>(a % m);
        while (nr) {
            std::int64_t q = r / nr;
            std::int64_t tmp = t - q * nt;
            t = nt;
            nt = tmp;
            tmp = r - q * nr;
            r = nr;
            nr = tmp;
        }
        if (r != 1) throw DomainError("element is not invertible");
        return t < 0 ? static_cast<std::uint64_t>(t + static_cast<std::int64_t>(m)) : static_cast<std::uint64_t>(t);
    }
    std::uint64_t reduce(std::int64_t v) const {
        std::int64_t r = v % static_cast<std::int64_t>(m);
        return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(m) : r);
    }
};

// p^k, refusing to leave the range where ModArith is valid.
inline std::uint64_t checked_pow(std::uint64_t p, int k) {
    std::uint64_t r = 1;
    for (int i = 0; i < k; ++i) {
        if (r > (std::uint64_t{1} << 62) / p) throw PrecisionError("p^N exceeds the 62-bit residue range");
        r *= p;
    }
    return r;
}

}  // namespace detail

/**
 * An element of Z/p^N carrying its own absolute precision N.
 * Binary operations keep the smaller precision; exact division by p^k
 * lowers it by k.
 */
class PadicInt {
public:
    PadicInt() = default;

    PadicInt(std::uint64_t p, int N, std::int64_t value) : p_(p), N_(N) {
        require_odd_prime(p);
        if (N < 1) throw DomainError("precision must be positive");
        mod_ = detail::checked_pow(p, N);
        r_ = detail::ModArith{mod_}.reduce(value);
    }

    static PadicInt from_big(std::uint64_t p, int N, const BigInt& v) {
        PadicInt x(p, N, 0);
        x.r_ = static_cast<std::uint64_t>(mod_floor(v, BigInt(x.mod_)));
        return x;
    }

    // a/b with b prime to p.
    static PadicInt from_rational(std::uint64_t p, int N, const Rational& q) {
        PadicInt num = from_big(p, N, numerator(q));
        PadicInt den = from_big(p, N, denominator(q));
        return num * den.inverse();
    }

    std::uint64_t prime() const { return p_; }
    int precision() const { return N_; }
    std::uint64_t residue() const { return r_; }
    std::uint64_t modulus() const { return mod_; }

    // Largest k <= N with p^k | residue, or kInfinity when the residue is 0.
    int valuation() const {
        if (r_ == 0) return kInfinity;
        int v = 0;
        std::uint64_t r = r_;
        while (r % p_ == 0) {
            r /= p_;
            ++v;
        }
        return v;
    }

    bool is_zero() const { return r_ == 0; }
    bool is_unit() const { return r_ % p_ != 0; }

    PadicInt with_precision(int n) const {
        if (n > N_) throw PrecisionError("cannot raise precision without a lift");
        PadicInt x(p_, n, 0);
        x.r_ = r_ % x.mod_;
        return x;
    }

    // Canonical lift of the residue to a higher precision. The extra digits
    // are zero, so only use this where the caller has argued they do not
    // influence the digits it keeps.
    PadicInt lift(int n) const {
        PadicInt x(p_, n, 0);
        x.r_ = r_ % x.mod_;
        return x;
    }

    friend PadicInt operator+(const PadicInt& a, const PadicInt& b) {
        auto [x, y] = align(a, b);
        x.r_ = detail::ModArith{x.mod_}.add(x.r_, y.r_);
        return x;
    }
    friend PadicInt operator-(const PadicInt& a, const PadicInt& b) {
        auto [x, y] = align(a, b);
        x.r_ = detail::ModArith{x.mod_}.sub(x.r_, y.r_);
        return x;
    }
    friend PadicInt operator*(const PadicInt& a, const PadicInt& b) {
        auto [x, y] = align(a, b);
        x.r_ = detail::ModArith{x.mod_}.mul(x.r_, y.r_);
        return x;
    }
    PadicInt operator-() const {
        PadicInt x = *this;
        x.r_ = x.r_ ? mod_ - x.r_ : 0;
        return x;
    }
    PadicInt& operator+=(const PadicInt& o) { return *this = *this + o; }
    PadicInt& operator-=(const PadicInt& o) { return *this = *this - o; }
    PadicInt& operator*=(const PadicInt& o) { return *this = *this * o; }

    PadicInt operator+(std::int64_t k) const { return *this + PadicInt(p_, N_, k); }
    PadicInt operator-(std::int64_t k) const { return *this - PadicInt(p_, N_, k); }
    PadicInt operator*(std::int64_t k) const { return *this * PadicInt(p_, N_, k); }

    // Equality of the digits both operands know.
    friend bool operator==(const PadicInt& a, const PadicInt& b) {
        if (a.p_ != b.p_) return false;
        auto [x, y] = align(a, b);
        return x.r_ == y.r_;
    }
    friend bool operator!=(const PadicInt& a, const PadicInt& b) { return !(a == b); }

    PadicInt inverse() const {
        if (!is_unit()) throw DomainError("inverse of a non-unit");
        PadicInt x = *this;
        x.r_ = detail::ModArith{mod_}.inv(r_);
        return x;
    }

    PadicInt pow(std::uint64_t e) const {
        PadicInt x = *this;
        x.r_ = detail::ModArith{mod_}.pow(r_, e);
        return x;
    }

    // Multiplication by p^k: k more digits become known.
    PadicInt shift(int k) const {
        PadicInt x(p_, N_ + k, 0);
        x.r_ = detail::ModArith{x.mod_}.mul(r_, detail::checked_pow(p_, k));
        return x;
    }

    // Exact division by p^k; the top k digits are lost.
    PadicInt divide_by_p(int k) const {
        if (k == 0) return *this;
        if (k >= N_) throw PrecisionError("division by p^k exhausts the precision");
        if (valuation() < k) throw DomainError("not divisible by p^k");
        PadicInt x(p_, N_ - k, 0);
        x.r_ = (r_ / detail::checked_pow(p_, k)) % x.mod_;
        return x;
    }

    // The element with the p-power stripped: x = p^v * unit_part().
    PadicInt unit_part() const {
        int v = valuation();
        if (v == kInfinity) throw DomainError("zero has no unit part");
        return divide_by_p(v);
    }

    std::int64_t signed_residue() const {
        return r_ > mod_ / 2 ? static_cast<std::int64_t>(r_) - static_cast<std::int64_t>(mod_)
                             : static_cast<std::int64_t>(r_);
    }

    // Base-p digits, least significant first.
    std::vector<unsigned> digits() const {
        std::vector<unsigned> d(N_);
        std::uint64_t r = r_;
        for (int i = 0; i < N_; ++i) {
            d[i] = static_cast<unsigned>(r % p_);
            r /= p_;
        }
        return d;
    }

    std::string str() const {
        return std::to_string(r_) + " (mod " + std::to_string(p_) + "^" + std::to_string(N_) + ")";
    }

    friend std::ostream& operator<<(std::ostream& os, const PadicInt& x) { return os << x.str(); }

private:
    static std::pair<PadicInt, PadicInt> align(const PadicInt& a, const PadicInt& b) {
        if (a.p_ != b.p_) throw DomainError("mixing different primes");
        if (a.N_ == b.N_) return {a, b};
        int n = std::min(a.N_, b.N_);
        return {a.with_precision(n), b.with_precision(n)};
    }

    std::uint64_t p_ = 0;
    int N_ = 0;
    std::uint64_t mod_ = 1;
    std::uint64_t r_ = 0;
};

// Elements of Z_p^x. Same representation; operations that need a unit check.
using PadicUnit = PadicInt;

inline void require_unit(const PadicInt& x, const char* what) {
    if (!x.is_unit()) throw DomainError(std::string(what) + " must be a p-adic unit");
}

inline void require_one_mod_p(const PadicInt& q, const char* what) {
    if ((q - 1).valuation() < 1) throw DomainError(std::string(what) + " must be congruent to 1 mod p");
}

namespace detail {

// Sum of a series whose i-th term is c_i * y^i / d_i where d_i = p^{e_i} * unit.
// Terms are divided exactly after lifting to N + max(e_i) digits.
template <class Coef>
PadicInt padic_series(const PadicInt& y, int imin, int imax, Coef coef) {
    const std::uint64_t p = y.prime();
    const int N = y.precision();
    int extra = 0;
    for (int i = imin; i <= imax; ++i) extra = std::max(extra, coef(i).second);
    const std::uint64_t M = checked_pow(p, N + extra);
    ModArith W{M};
    ModArith out{checked_pow(p, N)};
    std::uint64_t yi = W.pow(y.residue(), static_cast<std::uint64_t>(imin));
    std::uint64_t acc = 0;
    for (int i = imin; i <= imax; ++i) {
        auto [unit_and_sign, e] = coef(i);
        std::int64_t unit = unit_and_sign;
        std::uint64_t t = yi / checked_pow(p, e);  // exact: v(y^i) >= e by construction
        std::uint64_t u = W.reduce(unit < 0 ? -unit : unit);
        std::uint64_t term = W.mul(t, W.inv(u)) % out.m;
        acc = unit < 0 ? out.sub(acc, term) : out.add(acc, term);
        yi = W.mul(yi, y.residue());
    }
    return PadicInt::from_big(p, N, BigInt(acc));
}

}  // namespace detail

/**
 * p-adic logarithm of a principal unit, Σ (-1)^{i+1} (x-1)^i / i, to the
 * precision of x.
 */
inline PadicInt log_unit(const PadicInt& x) {
    require_odd_prime(x.prime());
    const PadicInt y = x - 1;
    const int v = y.valuation();
    if (v < 1) throw DomainError("log_unit needs x = 1 mod p");
    const int N = x.precision();
    if (v == kInfinity) return PadicInt(x.prime(), N, 0);
    const std::uint64_t p = x.prime();
    // i*v - floor(log_p i) is nondecreasing, so the last useful term is imax.
    int imax = 1;
    while ((imax + 1) * v - floor_log(imax + 1, p) < N) ++imax;
    return detail::padic_series(y, 1, imax, [&](int i) {
        int e = vp(std::int64_t{i}, p);
        std::int64_t unit = i / static_cast<std::int64_t>(ipow(p, e));
        return std::pair<std::int64_t, int>{(i % 2) ? unit : -unit, e};
    });
}

/**
 * p-adic exponential Σ y^i / i! for v(y) >= 1. Since p is odd this is
 * inside the disc of convergence.
 */
inline PadicInt exp_unit(const PadicInt& y) {
    require_odd_prime(y.prime());
    const int v = y.valuation();
    const int N = y.precision();
    const std::uint64_t p = y.prime();
    if (v < 1) throw DomainError("exp_unit needs v(y) >= 1");
    if (v == kInfinity) return PadicInt(p, N, 1);
    // v_p(i!) <= (i-1)/(p-1), so terms past imax vanish mod p^N.
    int imax = 0;
    while ((imax + 1) * v - imax / static_cast<int>(p - 1) < N) ++imax;
    // unit part of i! modulo the working modulus
    const int extra = vp_factorial(imax, p);
    const detail::ModArith W{detail::checked_pow(p, N + extra)};
    std::vector<std::uint64_t> fact_unit(imax + 1, 1);
    for (int i = 1; i <= imax; ++i) {
        std::int64_t k = i;
        while (k % static_cast<std::int64_t>(p) == 0) k /= static_cast<std::int64_t>(p);
        fact_unit[i] = W.mul(fact_unit[i - 1], static_cast<std::uint64_t>(k));
    }
    // detail::padic_series wants small signed units; go through the generic
    // path by hand here instead because i!'s unit part can be large.
    const detail::ModArith out{detail::checked_pow(p, N)};
    std::uint64_t yi = 1, acc = 0;
    for (int i = 0; i <= imax; ++i) {
        std::uint64_t t = yi / detail::checked_pow(p, vp_factorial(i, p));
        acc = out.add(acc, W.mul(t, W.inv(fact_unit[i])) % out.m);
        yi = W.mul(yi, y.residue());
    }
    return PadicInt::from_big(p, N, BigInt(acc));
}

/**
 * The q-analogue [a]_q = (q^a - 1)/(q - 1), with q^a = exp(a log q).
 * Division by q - 1 costs v(q-1) digits. When q = 1 at the known precision
 * the answer is a.
 */
inline PadicInt q_analogue(const PadicInt& a, const PadicUnit& q) {
    require_one_mod_p(q, "q");
    const int N = std::min(a.precision(), q.precision());
    const PadicInt qq = q.with_precision(N);
    const PadicInt aa = a.with_precision(N);
    const int k = (qq - 1).valuation();
    if (k >= N) return aa;
    const PadicInt qa = exp_unit(aa * log_unit(qq));
    const PadicInt num = qa - 1;
    if (N - k < 1) throw PrecisionError("q_analogue: no digits left after dividing by q-1");
    return num.divide_by_p(k) * (qq - 1).unit_part().inverse().with_precision(N - k);
}

/**
 * The unique a with [a]_q = b, namely log(1 + (q-1) b) / log q.
 */
inline PadicInt q_analogue_inverse(const PadicInt& b, const PadicUnit& q) {
    require_one_mod_p(q, "q");
    const int k = (q - 1).valuation();
    if (k >= q.precision()) return b.with_precision(std::min(b.precision(), q.precision()));
    const PadicInt w = (q - 1).divide_by_p(k);
    const PadicInt arg = (w * b).shift(k) + 1;
    const PadicInt num = log_unit(arg.with_precision(std::min(arg.precision(), q.precision())));
    const PadicInt den = log_unit(q);
    const int n = std::min(num.precision(), den.precision()) - k;
    if (n < 1) throw PrecisionError("q_analogue_inverse: precision exhausted");
    return num.divide_by_p(k).with_precision(n) * den.divide_by_p(k).unit_part().inverse().with_precision(n);
}

// Exponent a with [a]_{chi(tau)} = chi(g); it is a unit because a = [a] mod p.
inline PadicUnit chi_tau(const PadicUnit& chi_g, const PadicUnit& chi_tau_base) {
    require_unit(chi_g, "chi(g)");
    return q_analogue_inverse(chi_g, chi_tau_base);
}

// q^a for a natural a by repeated squaring (cross-check for exp(a log q)).
inline PadicInt int_power(const PadicInt& q, std::uint64_t a) { return q.pow(a); }

}  // namespace phitau
