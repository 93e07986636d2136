#pragma once

#include "linalg.hpp"

namespace phitau {

using ZMatrix = Matrix<PadicInt>;

inline ZMatrix zmatrix(std::uint64_t p, int N, int d, const std::vector<std::int64_t>& rows) {
    if (static_cast<int>(rows.size()) != d * d) throw DomainError("zmatrix: expected d*d entries");
    ZMatrix A(d, d, PadicInt(p, N, 0));
    for (int i = 0; i < d * d; ++i) A(i / d, i % d) = PadicInt(p, N, rows[i]);
    return A;
}

inline ZMatrix zidentity(const ZMatrix& like) { return ZMatrix::identity(like.rows(), like(0, 0)); }

// Smallest entry valuation; kInfinity when every entry is zero at its precision.
inline int valuation(const ZMatrix& A) {
    int v = kInfinity;
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) v = std::min(v, A(i, j).valuation());
    return v;
}

inline int precision(const ZMatrix& A) {
    int n = kInfinity;
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) n = std::min(n, A(i, j).precision());
    return n;
}

inline ZMatrix scaled(const ZMatrix& A, const PadicInt& c) {
    return A.map([&](const PadicInt& x) { return x * c; });
}

inline ZMatrix lifted(const ZMatrix& A, int n) {
    return A.map([&](const PadicInt& x) { return x.lift(n); });
}

inline ZMatrix divided_by_p(const ZMatrix& A, int k) {
    return A.map([&](const PadicInt& x) { return x.divide_by_p(k); });
}

/**
 * The matrix num / p^shift, known modulo p^precision(). Entries of num live
 * in Z/p^{precision + shift}.
 */
struct ScaledMatrix {
    ZMatrix num;
    int shift = 0;

    std::uint64_t prime() const { return num(0, 0).prime(); }
    int precision() const { return phitau::precision(num) - shift; }
    int valuation() const {
        const int v = phitau::valuation(num);
        return v == kInfinity ? kInfinity : v - shift;
    }

    ScaledMatrix with_shift(int s) const {
        if (s < shift) throw DomainError("cannot lower the shift");
        return {num.map([&](const PadicInt& x) { return x.shift(s - shift); }), s};
    }

    friend ScaledMatrix operator-(const ScaledMatrix& a, const ScaledMatrix& b) {
        const int s = std::max(a.shift, b.shift);
        return {a.with_shift(s).num - b.with_shift(s).num, s};
    }
    friend ScaledMatrix operator+(const ScaledMatrix& a, const ScaledMatrix& b) {
        const int s = std::max(a.shift, b.shift);
        return {a.with_shift(s).num + b.with_shift(s).num, s};
    }
    ScaledMatrix times(std::int64_t n) const { return {scaled(num, PadicInt(prime(), phitau::precision(num), n)), shift}; }

    // Rational entries num/p^shift, for display.
    std::string str() const {
        std::string s = "[";
        for (int i = 0; i < num.rows(); ++i) {
            if (i) s += "; ";
            for (int j = 0; j < num.cols(); ++j) {
                if (j) s += " ";
                s += std::to_string(num(i, j).residue());
                if (shift) s += "/" + std::to_string(prime()) + "^" + std::to_string(shift);
            }
        }
        return s + "]";
    }
};

/**
 * Does a - b vanish mod p^k? Indeterminate when either side is not known
 * to that precision.
 */
inline Verdict congruent(const ScaledMatrix& a, const ScaledMatrix& b, int k) {
    const ScaledMatrix d = a - b;
    if (d.precision() < k) return Verdict::Indeterminate;
    return d.valuation() >= k ? Verdict::True : Verdict::False;
}

namespace detail {

inline std::uint64_t unit_part(std::uint64_t i, std::uint64_t p) {
    while (i % p == 0) i /= p;
    return i;
}

}  // namespace detail

/**
 * Truncated logarithm sum_{i=1}^{p^m-1} (1-A)^i / i. Divisions are exact:
 * each term is scaled by p^{B - v_p(i)} with B = m - 1, and the sum is
 * returned over p^B, known mod p^{N - B} for A known mod p^N.
 * Note the sign: this is minus the usual logarithm.
 */
inline ScaledMatrix log_m(const ZMatrix& A, int m) {
    if (m < 1) throw DomainError("log_m: order must be positive");
    const std::uint64_t p = A(0, 0).prime();
    const int N = precision(A);
    const int B = m - 1;
    if (B >= N) throw PrecisionError("log_m: division budget exceeds the working precision");
    const std::uint64_t top = ipow(p, static_cast<unsigned>(m));
    const ZMatrix X = zidentity(A) - A;
    ZMatrix S = scaled(X, PadicInt(p, N, 0));
    ZMatrix Xi = zidentity(A);
    for (std::uint64_t i = 1; i < top; ++i) {
        Xi = Xi * X;
        const int v = vp(static_cast<std::int64_t>(i), p);
        const PadicInt c = PadicInt(p, N, static_cast<std::int64_t>(detail::unit_part(i, p))).inverse() *
                           PadicInt(p, N, static_cast<std::int64_t>(ipow(p, static_cast<unsigned>(B - v))));
        S = S + scaled(Xi, c);
    }
    return {S, B};
}

/**
 * Is (1-A)^i / i in p^{-c} M_d(Z_p) for every 1 <= i <= p^m? Entries known
 * only mod p^N count with valuation N, which is as much as can be certified.
 */
inline bool is_bounded(const ZMatrix& A, int m, int c) {
    const std::uint64_t p = A(0, 0).prime();
    const int N = precision(A);
    const std::uint64_t top = ipow(p, static_cast<unsigned>(m));
    const ZMatrix X = zidentity(A) - A;
    ZMatrix Xi = zidentity(A);
    for (std::uint64_t i = 1; i <= top; ++i) {
        Xi = Xi * X;
        const int v = std::min(valuation(Xi), N);
        if (v - vp(static_cast<std::int64_t>(i), p) < -c) return false;
    }
    return true;
}

/**
 * log A = -sum (1-A)^i / i for A = 1 mod p (p odd), summed until the terms
 * vanish mod p^N. The result has integral entries and keeps precision N.
 */
inline ZMatrix log_full(const ZMatrix& A) {
    const std::uint64_t p = A(0, 0).prime();
    const int N = precision(A);
    const ZMatrix X = zidentity(A) - A;
    if (valuation(X) < 1) throw DomainError("log_full: A must be the identity mod p");
    // v((1-A)^i / i) >= i - l(i)
    std::uint64_t imax = 1;
    while (static_cast<int>(imax + 1) - floor_log(imax + 1, p) < N) ++imax;
    const int B = floor_log(imax, p);
    const int K = N + B;
    const ZMatrix Xl = lifted(X, K);
    ZMatrix S = scaled(Xl, PadicInt(p, K, 0));
    ZMatrix Xi = zidentity(Xl);
    for (std::uint64_t i = 1; i <= imax; ++i) {
        Xi = Xi * Xl;
        const int v = vp(static_cast<std::int64_t>(i), p);
        const PadicInt c = PadicInt(p, K, static_cast<std::int64_t>(detail::unit_part(i, p))).inverse() *
                           PadicInt(p, K, static_cast<std::int64_t>(ipow(p, static_cast<unsigned>(B - v))));
        S = S - scaled(Xi, c);
    }
    return divided_by_p(S, B);
}

/**
 * exp B = sum B^i / i! for B = 0 mod p (p odd, inside the radius
 * |p|^{1/(p-1)}). The result keeps precision N.
 */
inline ZMatrix exp_full(const ZMatrix& Bm) {
    const std::uint64_t p = Bm(0, 0).prime();
    const int N = precision(Bm);
    if (valuation(Bm) < 1) throw DomainError("exp_full: entries must be divisible by p");
    // v(B^i / i!) >= i - v_p(i!) and v_p(i!) <= (i - 1)/(p - 1)
    auto vfact = [&](std::uint64_t i) { return vp_factorial(i, p); };
    std::uint64_t imax = 0;
    while (static_cast<int>(imax + 1) - vfact(imax + 1) < N) ++imax;
    const int D = vfact(imax);
    const int K = N + D;
    const ZMatrix Bl = lifted(Bm, K);
    ZMatrix S = zidentity(Bl).map([&](const PadicInt& x) { return x.shift(D).with_precision(K); });
    ZMatrix Bi = zidentity(Bl);
    PadicInt unit_fact(p, K, 1);
    for (std::uint64_t i = 1; i <= imax; ++i) {
        Bi = Bi * Bl;
        unit_fact = unit_fact * PadicInt(p, K, static_cast<std::int64_t>(detail::unit_part(i, p)));
        const PadicInt c = unit_fact.inverse() * PadicInt(p, K, static_cast<std::int64_t>(ipow(p, static_cast<unsigned>(D - vfact(i)))));
        S = S + scaled(Bi, c);
    }
    return divided_by_p(S, D);
}

/**
 * Check v_p((1 - f^{p^t})^i) >= p^t i / d - 1 for f unipotent mod p, with
 * d the rank; the integer form of the bound is ceil(p^t i / d) - 1.
 * Indeterminate when the bound exceeds what precision N can certify.
 */
inline Verdict rdc_valuation_check(const ZMatrix& f, int t, int i) {
    const std::uint64_t p = f(0, 0).prime();
    const int d = f.rows();
    const int N = precision(f);
    if (t < 0 || i < 1) throw DomainError("rdc: need t >= 0 and i >= 1");
    if (t >= 1 && static_cast<std::uint64_t>(d) < ipow(p, static_cast<unsigned>(t - 1)) * (p - 1))
        throw DomainError("rdc: rank below p^{t-1}(p-1)");
    const ZMatrix I = zidentity(f);
    if (valuation((f - I).pow(static_cast<std::uint64_t>(d))) < 1) throw DomainError("rdc: no power f^{p^n} is the identity mod p");
    const std::uint64_t pt = ipow(p, static_cast<unsigned>(t));
    const std::uint64_t num = pt * static_cast<std::uint64_t>(i);
    const int bound = static_cast<int>((num + d - 1) / d) - 1;
    const int v = valuation((I - f.pow(pt)).pow(static_cast<std::uint64_t>(i)));
    if (v != kInfinity) return v >= bound ? Verdict::True : Verdict::False;
    return bound <= N ? Verdict::True : Verdict::Indeterminate;
}

}  // namespace phitau
