#pragma once

#include "fq_linear.hpp"
#include "trunc_series.hpp"

namespace phitau {

/**
 * Parameters of a desk model of R: series in u with exponents in the fixed
 * lattice (1/L)Z, L = D p^jmax, coefficients in a finite field, and a hard
 * cap beyond which nothing is stored. Interned, never freed.
 */
struct PerfRing {
    std::uint64_t p;
    const FqField* F;
    std::int64_t D;
    int jmax;
    std::int64_t L;    // D p^jmax
    std::int64_t cap;  // in units of 1/L

    Rational to_rational(std::int64_t num) const { return Rational(num, L); }
    // Numerator of r over L, or LatticeTooCoarse.
    std::int64_t numerator_of(const Rational& r) const {
        Rational s = r * L;
        if (denominator(s) != 1) throw LatticeTooCoarse("exponent " + rat_str(r) + " is outside (1/" + std::to_string(L) + ")Z");
        return static_cast<std::int64_t>(numerator(s));
    }
};

inline const PerfRing* perf_ring(const FqField* F, std::int64_t D, int jmax, int cap) {
    static std::mutex mu;
    static std::map<std::tuple<const FqField*, std::int64_t, int, int>, std::unique_ptr<PerfRing>> reg;
    if (D < 1 || jmax < 0 || cap < 1) throw DomainError("perf_ring: bad lattice parameters");
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = reg[{F, D, jmax, cap}];
    if (!slot) {
        const std::int64_t L = D * static_cast<std::int64_t>(ipow(F->p, jmax));
        slot = std::make_unique<PerfRing>(PerfRing{F->p, F, D, jmax, L, cap * L});
    }
    return slot.get();
}

/**
 * Element of the desk model of R: a finite sum of c_k u^{k/L}, known below
 * exponent precision(). Valuations are exact rationals.
 */
class PerfSeries {
public:
    using Term = std::pair<std::int64_t, Fq>;

    PerfSeries() = default;
    // Zero known below the cap.
    explicit PerfSeries(const PerfRing* R) : R_(R), prec_(R->cap) {}
    PerfSeries(const PerfRing* R, std::int64_t prec) : R_(R), prec_(std::min(prec, R->cap)) {}

    static PerfSeries monomial(const PerfRing* R, const Fq& c, std::int64_t num) {
        PerfSeries f(R);
        if (c.field() != R->F) throw DomainError("coefficient outside the residue field of R");
        if (!c.is_zero() && num < f.prec_) f.t_.push_back({num, c});
        return f;
    }
    static PerfSeries monomial(const PerfRing* R, const Fq& c, const Rational& e) { return monomial(R, c, R->numerator_of(e)); }
    static PerfSeries constant(const PerfRing* R, const Fq& c) { return monomial(R, c, std::int64_t{0}); }
    static PerfSeries one(const PerfRing* R) { return constant(R, Fq::one(R->F)); }
    static PerfSeries from_terms(const PerfRing* R, std::vector<Term> terms, std::int64_t prec) {
        PerfSeries f(R, prec);
        f.t_ = std::move(terms);
        f.normalize();
        return f;
    }

    // Image of a series over a subfield of F, u -> u.
    static PerfSeries from_trunc(const PerfRing* R, const TruncSeries<Fq>& f) {
        std::vector<Term> terms;
        const FqEmbedding* emb = f.is_zero() ? nullptr : &embedding(f.zero_coeff().field(), R->F);
        for (int k = f.valuation(); k < f.end(); ++k) {
            Fq c = f.coeff_or_zero(k);
            if (!c.is_zero()) terms.push_back({k * R->L, (*emb)(c)});
        }
        const std::int64_t prec = f.precision() == kInfinity ? R->cap : f.precision() * R->L;
        return from_terms(R, terms, prec);
    }

    // A random element with leading exponent vnum and nterms further terms.
    static PerfSeries random(const PerfRing* R, Rng& rng, std::int64_t vnum, int nterms) {
        std::vector<Term> terms{{vnum, Fq::random_nonzero(R->F, rng)}};
        for (int i = 0; i < nterms; ++i) {
            std::int64_t span = R->cap - vnum - 1;
            if (span <= 0) break;
            terms.push_back({vnum + 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(span))), Fq::random(R->F, rng)});
        }
        return from_terms(R, terms, R->cap);
    }

    const PerfRing* ring() const { return R_; }
    const std::vector<Term>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    std::int64_t precision_num() const { return prec_; }
    Rational precision() const { return R_->to_rational(prec_); }
    std::int64_t valuation_num() const { return t_.empty() ? prec_ : t_.front().first; }
    // v_R; for a series that is zero as far as known, its precision.
    Rational valuation() const { return R_->to_rational(valuation_num()); }
    const Fq& leading_coeff() const {
        if (t_.empty()) throw DomainError("leading coefficient of zero");
        return t_.front().second;
    }

    Fq coeff(std::int64_t num) const {
        if (num >= prec_) throw PrecisionError("coefficient beyond the precision");
        auto it = std::lower_bound(t_.begin(), t_.end(), num, [](const Term& t, std::int64_t k) { return t.first < k; });
        return (it != t_.end() && it->first == num) ? it->second : Fq::zero(R_->F);
    }

    PerfSeries truncated(std::int64_t prec) const {
        PerfSeries f = *this;
        f.prec_ = std::min(prec_, prec);
        f.normalize();
        return f;
    }
    // Terms with exponent below (resp. at least) num; both keep the precision.
    PerfSeries below(std::int64_t num) const {
        PerfSeries f = *this;
        f.t_.erase(std::remove_if(f.t_.begin(), f.t_.end(), [&](const Term& t) { return t.first >= num; }), f.t_.end());
        return f;
    }
    PerfSeries at_least(std::int64_t num) const {
        PerfSeries f = *this;
        f.t_.erase(std::remove_if(f.t_.begin(), f.t_.end(), [&](const Term& t) { return t.first < num; }), f.t_.end());
        return f;
    }

    friend PerfSeries operator+(const PerfSeries& a, const PerfSeries& b) { return merge(a, b, false); }
    friend PerfSeries operator-(const PerfSeries& a, const PerfSeries& b) { return merge(a, b, true); }
    PerfSeries operator-() const {
        PerfSeries f = *this;
        for (auto& t : f.t_) t.second = -t.second;
        return f;
    }

    friend PerfSeries operator*(const PerfSeries& a, const PerfSeries& b) {
        same(a, b);
        const std::int64_t prec = std::min(a.prec_ + b.valuation_num(), b.prec_ + a.valuation_num());
        return mul_below(a, b, prec);
    }

    PerfSeries scaled(const Fq& c) const {
        PerfSeries f = *this;
        for (auto& t : f.t_) t.second = t.second * c;
        f.normalize();
        return f;
    }

    // Multiplication by u^{num/L}.
    PerfSeries shift(std::int64_t num) const {
        PerfSeries f(R_, prec_ + num);
        for (const auto& [k, c] : t_)
            if (k + num < f.prec_) f.t_.push_back({k + num, c});
        return f;
    }

    // x -> x^p: exponents and precision scale by p.
    PerfSeries frobenius() const {
        const std::int64_t p = static_cast<std::int64_t>(R_->p);
        PerfSeries f(R_, prec_ * p);
        for (const auto& [k, c] : t_)
            if (k * p < f.prec_) f.t_.push_back({k * p, c.frobenius()});
        return f;
    }

    // x -> x^{1/p}; fails when an exponent leaves the lattice.
    PerfSeries pth_root() const {
        const std::int64_t p = static_cast<std::int64_t>(R_->p);
        PerfSeries f(R_, ceil_div(BigInt(prec_), BigInt(p)).convert_to<std::int64_t>());
        for (const auto& [k, c] : t_) {
            if (k % p != 0)
                throw LatticeTooCoarse("p-th root of u^" + rat_str(R_->to_rational(k)) + " is outside the exponent lattice");
            f.t_.push_back({k / p, c.pth_root()});
        }
        f.normalize();
        return f;
    }

    /**
     * Inverse of a nonzero element: with f = c u^v (1 + h), Newton's
     * iteration on (1 + h)^{-1}. Precision drops to prec - 2v.
     */
    PerfSeries inverse() const {
        if (t_.empty()) throw DomainError("inverse of a series that is zero at its precision");
        const std::int64_t v = valuation_num();
        const Fq ci = leading_coeff().inverse();
        const PerfSeries g = shift(-v).scaled(ci);  // 1 + h, known below rel
        const std::int64_t rel = prec_ - v;
        PerfSeries s = one(R_);
        const PerfSeries two = constant(R_, Fq(R_->F, 2));
        for (int it = 0;; ++it) {
            PerfSeries next = mul_below(s, two - mul_below(g, s, rel), rel);
            next.prec_ = R_->cap;
            if (next.t_ == s.t_) break;
            s = std::move(next);
            if (it > 64) throw Error("PerfSeries inverse did not stabilize");
        }
        s.prec_ = std::min(rel, R_->cap);
        s.normalize();
        return s.scaled(ci).shift(-v);
    }

    friend PerfSeries operator/(const PerfSeries& a, const PerfSeries& b) { return a * b.inverse(); }

    PerfSeries pow(std::uint64_t e) const {
        PerfSeries r = one(R_), b = *this;
        while (e) {
            if (e & 1) r = r * b;
            e >>= 1;
            if (e) b = b * b;
        }
        return r;
    }

    // Equality at the common precision.
    friend bool operator==(const PerfSeries& a, const PerfSeries& b) {
        same(a, b);
        const std::int64_t P = std::min(a.prec_, b.prec_);
        return a.truncated(P).t_ == b.truncated(P).t_;
    }
    friend bool operator!=(const PerfSeries& a, const PerfSeries& b) { return !(a == b); }

    std::string str() const {
        std::string s;
        for (const auto& [k, c] : t_) {
            if (!s.empty()) s += " + ";
            s += c.str();
            if (k != 0) s += "*u^" + rat_str(R_->to_rational(k));
        }
        if (s.empty()) s = "0";
        return s + " + O(u^" + rat_str(precision()) + ")";
    }

private:
    static void same(const PerfSeries& a, const PerfSeries& b) {
        if (a.R_ != b.R_) throw DomainError("series from different models of R");
    }

    static PerfSeries merge(const PerfSeries& a, const PerfSeries& b, bool sub) {
        same(a, b);
        PerfSeries r(a.R_, std::min(a.prec_, b.prec_));
        std::size_t i = 0, j = 0;
        while (i < a.t_.size() || j < b.t_.size()) {
            if (j == b.t_.size() || (i < a.t_.size() && a.t_[i].first < b.t_[j].first)) {
                r.t_.push_back(a.t_[i++]);
            } else if (i == a.t_.size() || b.t_[j].first < a.t_[i].first) {
                r.t_.push_back({b.t_[j].first, sub ? -b.t_[j].second : b.t_[j].second});
                ++j;
            } else {
                r.t_.push_back({a.t_[i].first, sub ? a.t_[i].second - b.t_[j].second : a.t_[i].second + b.t_[j].second});
                ++i;
                ++j;
            }
        }
        r.normalize();
        return r;
    }

    // Product with every term at exponent >= bound dropped; result precision min(bound, cap).
    static PerfSeries mul_below(const PerfSeries& a, const PerfSeries& b, std::int64_t bound) {
        PerfSeries r(a.R_, bound);
        if (a.t_.empty() || b.t_.empty()) return r;
        const std::int64_t lo = a.t_.front().first + b.t_.front().first;
        const std::int64_t hi = std::min(r.prec_, a.t_.back().first + b.t_.back().first + 1);
        if (hi <= lo) return r;
        std::vector<Fq> acc(static_cast<std::size_t>(hi - lo), Fq::zero(a.R_->F));
        std::vector<bool> touched(acc.size(), false);
        for (const auto& [ka, ca] : a.t_) {
            for (const auto& [kb, cb] : b.t_) {
                const std::int64_t k = ka + kb;
                if (k >= hi) break;
                acc[k - lo] = acc[k - lo] + ca * cb;
                touched[k - lo] = true;
            }
        }
        for (std::size_t i = 0; i < acc.size(); ++i)
            if (touched[i] && !acc[i].is_zero()) r.t_.push_back({lo + static_cast<std::int64_t>(i), acc[i]});
        return r;
    }

    void normalize() {
        std::sort(t_.begin(), t_.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
        std::vector<Term> out;
        for (auto& t : t_) {
            if (t.first >= prec_) break;
            if (!out.empty() && out.back().first == t.first)
                out.back().second = out.back().second + t.second;
            else
                out.push_back(t);
        }
        out.erase(std::remove_if(out.begin(), out.end(), [](const Term& t) { return t.second.is_zero(); }), out.end());
        t_ = std::move(out);
    }

    const PerfRing* R_ = nullptr;
    std::vector<Term> t_;
    std::int64_t prec_ = 0;
};

template <>
struct RingTraits<PerfSeries> {
    static PerfSeries zero(const PerfSeries& like) { return PerfSeries(like.ring()); }
    static PerfSeries one(const PerfSeries& like) { return PerfSeries::one(like.ring()); }
    static PerfSeries from_int(const PerfSeries& like, std::int64_t k) {
        return PerfSeries::constant(like.ring(), Fq(like.ring()->F, k));
    }
    static PerfSeries from_big(const PerfSeries& like, const BigInt& k) {
        return from_int(like, static_cast<std::int64_t>(mod_floor(k, BigInt(like.ring()->p))));
    }
    static bool is_zero(const PerfSeries& x) { return x.is_zero(); }
    static bool is_unit(const PerfSeries& x) { return !x.is_zero() && x.valuation_num() == 0; }
    static int p_nilpotency(const PerfSeries&) { return 1; }
    static PerfSeries frobenius(const PerfSeries& x) { return x.frobenius(); }
    static PerfSeries inverse(const PerfSeries& x) { return x.inverse(); }
    static std::string str(const PerfSeries& x) { return x.str(); }
};

using WittPerf = WittVector<PerfSeries>;

/**
 * Solve z y = x for y in W_n(m_R). Coordinatewise, (z y)_i = z_0^{p^i} y_i
 * + (terms in z and y_0..y_{i-1}), so y_i is found by one division. Throws
 * NotDivisible when a coordinate of the quotient has valuation <= 0, and
 * PrecisionError when a coordinate is known to no positive exponent.
 */
inline WittPerf witt_divide(const WittPerf& x, const WittPerf& z) {
    const int n = x.length();
    if (z.length() != n) throw DomainError("witt_divide: length mismatch");
    if (z[0].is_zero()) throw DomainError("witt_divide: leading coordinate of the divisor is zero");
    const PerfRing* R = z[0].ring();
    const std::uint64_t p = x.prime();
    std::vector<PerfSeries> y(n, PerfSeries(R));
    for (int i = 0; i < n; ++i) {
        PerfSeries known = x[i];
        if (i > 0) {
            // coordinate i of z * (y_0, ..., y_{i-1}, 0, ...)
            std::vector<PerfSeries> partial(y.begin(), y.begin() + i);
            partial.resize(n, PerfSeries(R));
            known = known - (z * WittPerf(p, partial))[i];
        }
        PerfSeries yi = known / z[0].pow(ipow(p, i));
        if (!yi.is_zero() && yi.valuation() <= 0)
            throw NotDivisible("witt_divide: coordinate " + std::to_string(i) + " of the quotient has valuation " + rat_str(yi.valuation()));
        if (yi.is_zero() && yi.precision() <= 0)
            throw PrecisionError("witt_divide: coordinate " + std::to_string(i) + " has no certified digits");
        y[i] = yi;
    }
    return {p, y};
}

}  // namespace phitau
