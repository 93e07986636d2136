#pragma once

#include <algorithm>
#include <functional>

#include "witt.hpp"

namespace phitau {

namespace detail {

inline int sat_add(int a, int b) {
    if (a == kInfinity || b == kInfinity) return kInfinity;
    return a + b;
}

}  // namespace detail

/**
 * Truncated Laurent series sum c_k u^k over a coefficient ring C, with
 * absolute precision: coefficients of u^k for k >= precision() are
 * unknown. precision() == kInfinity marks an exact Laurent polynomial.
 *
 * With C = WittVector<Fq> of length n this models S/p^n = W_n(F_q)[[u]]
 * and, allowing negative exponents, E^int/p^n.
 */
template <class C>
class TruncSeries {
public:
    using Tr = RingTraits<C>;

    TruncSeries() = default;
    // The zero series known below exponent prec.
    TruncSeries(const C& like, int prec) : zero_(Tr::zero(like)), v_(0), prec_(prec) {}

    static TruncSeries from_coeffs(const C& like, std::vector<C> coeffs, int v, int prec) {
        TruncSeries f(like, prec);
        f.v_ = v;
        f.c_ = std::move(coeffs);
        f.normalize();
        return f;
    }
    static TruncSeries monomial(const C& c, int k, int prec = kInfinity) { return from_coeffs(c, {c}, k, prec); }
    static TruncSeries constant(const C& c, int prec = kInfinity) { return monomial(c, 0, prec); }
    static TruncSeries one(const C& like, int prec = kInfinity) { return constant(Tr::one(like), prec); }
    static TruncSeries variable(const C& like, int prec = kInfinity) { return monomial(Tr::one(like), 1, prec); }

    int precision() const { return prec_; }
    bool is_zero() const { return c_.empty(); }
    // Lowest exponent with a nonzero coefficient; the precision for a series
    // that is zero as far as known.
    int valuation() const { return c_.empty() ? prec_ : v_; }
    // One past the highest stored exponent.
    int end() const { return c_.empty() ? v_ : v_ + static_cast<int>(c_.size()); }
    const C& zero_coeff() const { return zero_; }

    C coeff(int k) const {
        if (k >= prec_) throw PrecisionError("coefficient of u^" + std::to_string(k) + " is beyond the precision");
        if (k < v_ || k >= end()) return zero_;
        return c_[k - v_];
    }
    // Coefficient without the precision guard (zero when unknown).
    C coeff_or_zero(int k) const { return (k < v_ || k >= end()) ? zero_ : c_[k - v_]; }

    // Index of the first coefficient that is a unit of C: the Weierstrass degree
    // of a series over a local coefficient ring.
    int unit_degree() const {
        for (int k = v_; k < end(); ++k)
            if (Tr::is_unit(c_[k - v_])) return k;
        throw DomainError("no unit coefficient below the precision");
    }

    TruncSeries truncated(int prec) const {
        TruncSeries f = *this;
        f.prec_ = std::min(prec_, prec);
        f.normalize();
        return f;
    }

    // Same stored coefficients, relabelled precision (used to iterate on exact
    // copies whose truncation is tracked separately).
    TruncSeries with_precision(int prec) const {
        TruncSeries f = *this;
        f.prec_ = prec;
        f.normalize();
        return f;
    }

    friend TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) { return combine(a, b, false); }
    friend TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) { return combine(a, b, true); }
    TruncSeries operator-() const {
        TruncSeries f = *this;
        for (C& c : f.c_) c = zero_ - c;
        return f;
    }

    friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
        int prec = std::min(detail::sat_add(a.prec_, b.valuation()), detail::sat_add(b.prec_, a.valuation()));
        TruncSeries r(a.zero_, prec);
        if (a.is_zero() || b.is_zero()) return r;
        r.v_ = a.v_ + b.v_;
        int top = a.end() + b.end() - 1;
        if (prec != kInfinity) top = std::min(top, prec);
        if (top <= r.v_) return r;
        r.c_.assign(top - r.v_, a.zero_);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (Tr::is_zero(a.c_[i])) continue;
            const int ei = a.v_ + static_cast<int>(i);
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                const int e = ei + b.v_ + static_cast<int>(j);
                if (e >= top) break;
                r.c_[e - r.v_] = r.c_[e - r.v_] + a.c_[i] * b.c_[j];
            }
        }
        r.normalize();
        return r;
    }

    TruncSeries scaled(const C& k) const {
        TruncSeries f = *this;
        for (C& c : f.c_) c = c * k;
        f.normalize();
        return f;
    }

    // Multiplication by u^k.
    TruncSeries shift(int k) const {
        TruncSeries f = *this;
        f.v_ += k;
        f.prec_ = detail::sat_add(prec_, k);
        return f;
    }

    // Part below u^d, an exact polynomial once all its coefficients are known.
    TruncSeries low(int d) const {
        if (prec_ < d) throw PrecisionError("low part needs precision >= " + std::to_string(d));
        TruncSeries f(zero_, kInfinity);
        f.v_ = v_;
        for (int k = v_; k < std::min(d, end()); ++k) f.c_.push_back(c_[k - v_]);
        f.normalize();
        return f;
    }
    // (f - low(d)) / u^d.
    TruncSeries high(int d) const {
        TruncSeries f(zero_, detail::sat_add(prec_, -d));
        f.v_ = 0;
        for (int k = std::max(d, v_); k < end(); ++k) f.c_.push_back(c_[k - v_]);
        f.normalize();
        return f;
    }

    // Coefficientwise Frobenius and u -> u^p.
    TruncSeries frobenius(std::uint64_t p) const {
        const int pp = static_cast<int>(p);
        TruncSeries f(zero_, prec_ == kInfinity ? kInfinity : prec_ * pp);
        if (is_zero()) return f;
        f.v_ = v_ * pp;
        f.c_.assign((c_.size() - 1) * p + 1, zero_);
        for (std::size_t i = 0; i < c_.size(); ++i) f.c_[i * p] = Tr::frobenius(c_[i]);
        f.normalize();
        return f;
    }

    // d/du; the top known coefficient is lost.
    TruncSeries derivative() const {
        TruncSeries f(zero_, detail::sat_add(prec_, -1));
        if (is_zero()) return f;
        f.v_ = v_ - 1;
        for (std::size_t i = 0; i < c_.size(); ++i)
            f.c_.push_back(c_[i] * Tr::from_int(zero_, v_ + static_cast<int>(i)));
        f.normalize();
        return f;
    }

    /**
     * Inverse in the Laurent ring. Write f = c u^d (1 + h) with c the first
     * unit coefficient; below u^d the coefficients of f are divisible by p,
     * so the Neumann series for (1 + h)^{-1} terminates at the truncation.
     */
    TruncSeries inverse() const {
        const int d = unit_degree();
        const C ci = Tr::inverse(coeff(d));
        // h = f / (c u^d) - 1
        const TruncSeries h = shift(-d).scaled(ci) - one(zero_);
        if (h.is_zero()) return monomial(ci, -d, detail::sat_add(prec_, -2 * d));
        const int rel = detail::sat_add(prec_, -d);
        if (rel == kInfinity) throw PrecisionError("inverse of an exact polynomial needs a finite precision");
        // lowest exponent a power of h reaches before p-torsion kills it
        const int depth = std::min(0, (v_ - d) * (Tr::p_nilpotency(zero_) - 1));
        const int target = rel + depth;
        // Iterate s <- 1 - h s on exact polynomials; the coefficients below
        // target are final once two iterates agree.
        TruncSeries s = one(zero_);
        for (int it = 0;; ++it) {
            TruncSeries next = (one(zero_) - h * s).truncated(target);
            next.prec_ = kInfinity;
            if (next == s) break;
            s = std::move(next);
            if (it > 100000) throw Error("Laurent inverse did not stabilize");
        }
        s.prec_ = target;
        return s.scaled(ci).shift(-d);
    }

    // Equality at the common precision.
    friend bool operator==(const TruncSeries& a, const TruncSeries& b) {
        const int P = std::min(a.prec_, b.prec_);
        const int lo = std::min(a.v_, b.v_);
        const int hi = std::min(P == kInfinity ? std::max(a.end(), b.end()) : P, std::max(a.end(), b.end()));
        for (int k = lo; k < hi; ++k)
            if (!(a.coeff_or_zero(k) == b.coeff_or_zero(k))) return false;
        return true;
    }
    friend bool operator!=(const TruncSeries& a, const TruncSeries& b) { return !(a == b); }

    // Same coefficients and same precision.
    bool same_as(const TruncSeries& o) const { return prec_ == o.prec_ && *this == o; }

    template <class F>
    auto map(F f) const -> TruncSeries<decltype(f(std::declval<C>()))> {
        using D = decltype(f(std::declval<C>()));
        std::vector<D> cs;
        for (const C& c : c_) cs.push_back(f(c));
        return TruncSeries<D>::from_coeffs(f(zero_), cs, v_, prec_);
    }

    std::string str() const {
        std::string s;
        for (int k = v_; k < end(); ++k) {
            const C& c = c_[k - v_];
            if (Tr::is_zero(c)) continue;
            if (!s.empty()) s += " + ";
            s += Tr::str(c);
            if (k == 1) s += "*u";
            else if (k != 0) s += "*u^" + std::to_string(k);
        }
        if (s.empty()) s = "0";
        if (prec_ != kInfinity) s += " + O(u^" + std::to_string(prec_) + ")";
        return s;
    }

private:
    static TruncSeries combine(const TruncSeries& a, const TruncSeries& b, bool sub) {
        const int prec = std::min(a.prec_, b.prec_);
        TruncSeries r(a.zero_, prec);
        if (a.is_zero() && b.is_zero()) return r;
        int lo = a.is_zero() ? b.v_ : b.is_zero() ? a.v_ : std::min(a.v_, b.v_);
        int hi = std::max(a.end(), b.end());
        if (prec != kInfinity) hi = std::min(hi, prec);
        if (hi <= lo) return r;
        r.v_ = lo;
        r.c_.reserve(hi - lo);
        for (int k = lo; k < hi; ++k) {
            C x = a.coeff_or_zero(k), y = b.coeff_or_zero(k);
            r.c_.push_back(sub ? x - y : x + y);
        }
        r.normalize();
        return r;
    }

    void normalize() {
        if (prec_ != kInfinity && end() > prec_) {
            int keep = std::max(0, prec_ - v_);
            c_.resize(std::min<std::size_t>(c_.size(), keep));
        }
        std::size_t lead = 0;
        while (lead < c_.size() && Tr::is_zero(c_[lead])) ++lead;
        if (lead == c_.size()) {
            c_.clear();
            v_ = 0;
            return;
        }
        if (lead) {
            c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead));
            v_ += static_cast<int>(lead);
        }
        while (!c_.empty() && Tr::is_zero(c_.back())) c_.pop_back();
    }

    C zero_{};
    int v_ = 0;
    std::vector<C> c_;
    int prec_ = kInfinity;
};

template <class C>
struct RingTraits<TruncSeries<C>> {
    using S = TruncSeries<C>;
    static S zero(const S& like) { return S(like.zero_coeff(), like.precision()); }
    static S one(const S& like) { return S::one(like.zero_coeff(), like.precision()); }
    static S from_int(const S& like, std::int64_t k) {
        return S::constant(RingTraits<C>::from_int(like.zero_coeff(), k), like.precision());
    }
    static S from_big(const S& like, const BigInt& k) {
        return S::constant(RingTraits<C>::from_big(like.zero_coeff(), k), like.precision());
    }
    static bool is_zero(const S& x) { return x.is_zero(); }
    static bool is_unit(const S& x) {
        return !x.is_zero() && x.valuation() == 0 && RingTraits<C>::is_unit(x.coeff(0));
    }
    static S inverse(const S& x) { return x.inverse(); }
    static std::string str(const S& x) { return x.str(); }
};

}  // namespace phitau
