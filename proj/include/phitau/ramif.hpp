#pragma once

#include <optional>
#include <vector>

#include "common.hpp"

namespace phitau {

namespace detail {

// q^k for a nonzero rational q and any integer k.
inline Rational rat_pow(const Rational& q, std::int64_t k) {
    const unsigned e = static_cast<unsigned>(k < 0 ? -k : k);
    const Rational r(bigpow(numerator(q), e), bigpow(denominator(q), e));
    return k < 0 ? 1 / r : r;
}

inline BigInt lcm(const BigInt& a, const BigInt& b) { return a / boost::multiprecision::gcd(a, b) * b; }

}  // namespace detail

/**
 * Continuous piecewise-linear function on [0, inf): breakpoints (x_k, y_k)
 * starting at x = 0, then a final slope after the last breakpoint.
 */
class PLFunction {
public:
    PLFunction(std::vector<std::pair<Rational, Rational>> pts, Rational final_slope)
        : pts_(std::move(pts)), final_(std::move(final_slope)) {
        if (pts_.empty() || pts_.front().first != 0) throw DomainError("PLFunction: first breakpoint must sit at x = 0");
        for (std::size_t k = 1; k < pts_.size(); ++k)
            if (pts_[k].first <= pts_[k - 1].first) throw DomainError("PLFunction: breakpoints must increase");
    }

    static PLFunction identity() { return PLFunction({{0, 0}}, 1); }

    const std::vector<std::pair<Rational, Rational>>& breakpoints() const { return pts_; }
    Rational final_slope() const { return final_; }

    std::vector<Rational> slopes() const {
        std::vector<Rational> s;
        for (std::size_t k = 1; k < pts_.size(); ++k)
            s.push_back((pts_[k].second - pts_[k - 1].second) / (pts_[k].first - pts_[k - 1].first));
        s.push_back(final_);
        return s;
    }

    Rational operator()(const Rational& x) const {
        if (x < 0) throw DomainError("PLFunction: negative argument");
        const auto s = slopes();
        for (std::size_t k = 1; k < pts_.size(); ++k)
            if (x <= pts_[k].first) return pts_[k - 1].second + s[k - 1] * (x - pts_[k - 1].first);
        return pts_.back().second + final_ * (x - pts_.back().first);
    }

    bool is_concave() const {
        const auto s = slopes();
        for (std::size_t k = 1; k < s.size(); ++k)
            if (s[k] > s[k - 1]) return false;
        return true;
    }

    // Functional inverse; needs positive slopes and y(0) = 0.
    PLFunction inverse() const {
        if (pts_.front().second != 0) throw DomainError("PLFunction: inverse needs f(0) = 0");
        for (const auto& s : slopes())
            if (s <= 0) throw DomainError("PLFunction: inverse needs positive slopes");
        std::vector<std::pair<Rational, Rational>> q;
        for (const auto& [x, y] : pts_) q.emplace_back(y, x);
        return PLFunction(std::move(q), 1 / final_);
    }

    friend bool operator==(const PLFunction& a, const PLFunction& b) { return a.pts_ == b.pts_ && a.final_ == b.final_; }

    std::string str() const {
        std::string s;
        for (const auto& [x, y] : pts_) s += "(" + rat_str(x) + "," + rat_str(y) + ") ";
        return s + "slope " + rat_str(final_);
    }

private:
    std::vector<std::pair<Rational, Rational>> pts_;
    Rational final_;
};

struct FiltrationJump {
    Rational upto;       // the group has this order for t in (previous jump, upto]
    std::uint64_t order;
};

/**
 * Herbrand's function phi(lambda) = int_0^lambda |G_(t)| / |G_(0)| dt for a
 * lower-numbering filtration given by its jumps; beyond the last jump the
 * group is trivial.
 */
inline PLFunction herbrand_phi(const std::vector<FiltrationJump>& jumps) {
    if (jumps.empty()) return PLFunction::identity();
    const Rational g0 = jumps.front().order;
    std::vector<std::pair<Rational, Rational>> pts{{0, 0}};
    Rational x = 0, y = 0;
    std::uint64_t prev = jumps.front().order;
    for (const auto& j : jumps) {
        if (j.order == 0 || j.order > prev) throw DomainError("herbrand_phi: orders must be positive and nonincreasing");
        if (j.upto <= x) throw DomainError("herbrand_phi: jumps must increase");
        y += Rational(j.order) / g0 * (j.upto - x);
        x = j.upto;
        pts.emplace_back(x, y);
        prev = j.order;
    }
    return PLFunction(std::move(pts), 1 / g0);
}

inline PLFunction herbrand_psi(const std::vector<FiltrationJump>& jumps) { return herbrand_phi(jumps).inverse(); }

// lambda_s = 1 + e p^s / (p - 1) and mu_s = 1 + e (s + 1/(p - 1)).
inline Rational kinf_lambda(std::uint64_t p, std::uint64_t e, int s) {
    return 1 + Rational(e) * detail::rat_pow(Rational(p), s) / (p - 1);
}
inline Rational kinf_mu(std::uint64_t p, std::uint64_t e, int s) { return 1 + Rational(e) * (s + Rational(1, p - 1)); }

/**
 * phi of K_inf / K: the identity up to lambda_1, then slope p^{-k} on
 * [lambda_k, lambda_{k+1}]. Exact on [0, lambda_{s_max + 1}]. The identity
 * piece is read off the picture (lambda_1 = mu_1), not from the formula.
 */
inline PLFunction phi_Kinf(std::uint64_t p, std::uint64_t e, int s_max) {
    require_odd_prime(p);
    if (s_max < 1 || e < 1) throw DomainError("phi_Kinf: need s_max >= 1 and e >= 1");
    std::vector<std::pair<Rational, Rational>> pts{{0, 0}};
    for (int s = 1; s <= s_max; ++s) pts.emplace_back(kinf_lambda(p, e, s), kinf_mu(p, e, s));
    return PLFunction(std::move(pts), detail::rat_pow(Rational(p), -s_max));
}

/**
 * The closed form 1 + e floor(s) + e p^{frac(s)} / (p - 1) with
 * p^s = (p - 1)(lambda - 1)/e, for lambda >= lambda_1. p^{frac(s)} is
 * rational whenever lambda is.
 */
inline Rational phi_Kinf_closed_form(std::uint64_t p, std::uint64_t e, const Rational& lambda) {
    if (lambda < kinf_lambda(p, e, 1)) throw DomainError("closed form holds from lambda_1 on");
    const Rational ps = Rational(p - 1) * (lambda - 1) / e;
    std::int64_t k = 0;
    while (detail::rat_pow(Rational(p), k + 1) <= ps) ++k;
    return 1 + Rational(e) * k + Rational(e) * (ps / detail::rat_pow(Rational(p), k)) / (p - 1);
}

/**
 * r0 + r1 log_p(x) with rational r0, r1 and x > 0. Comparisons reduce to
 * integer power tests, no floating point.
 */
struct BoundExpr {
    std::uint64_t p = 3;
    Rational r0 = 0, r1 = 0, x = 1;

    static BoundExpr rational(std::uint64_t p, const Rational& r) { return {p, r, 0, 1}; }

    // log_p(x) when x is an integral power of p.
    std::optional<std::int64_t> exact_log() const {
        const int v = vp(x, p);
        if (x == detail::rat_pow(Rational(p), v)) return v;
        return std::nullopt;
    }
    bool is_rational() const { return r1 == 0 || exact_log().has_value(); }
    Rational value() const {
        if (r1 == 0) return r0;
        const auto l = exact_log();
        if (!l) throw DomainError("BoundExpr: log term is irrational");
        return r0 + r1 * *l;
    }

    // Sign of a - b.
    friend int compare(const BoundExpr& a, const BoundExpr& b) {
        if (a.p != b.p) throw DomainError("BoundExpr: different primes");
        if (a.x <= 0 || b.x <= 0) throw DomainError("BoundExpr: log of a nonpositive number");
        // sign of c + log_p Z with c = D (a.r0 - b.r0), Z = a.x^{D a.r1} b.x^{-D b.r1}
        const BigInt D = detail::lcm(denominator(a.r1), denominator(b.r1));
        const Rational c = Rational(D) * (a.r0 - b.r0);
        const Rational ea = a.r1 * D, eb = b.r1 * D;
        const Rational Z = detail::rat_pow(a.x, static_cast<std::int64_t>(numerator(ea))) *
                           detail::rat_pow(b.x, -static_cast<std::int64_t>(numerator(eb)));
        // c = u/w, w > 0: sign of p^u Z^w - 1
        const BigInt u = numerator(c), w = denominator(c);
        const Rational t = detail::rat_pow(Rational(a.p), static_cast<std::int64_t>(u)) * detail::rat_pow(Z, static_cast<std::int64_t>(w));
        return t > 1 ? 1 : (t < 1 ? -1 : 0);
    }
    friend bool operator==(const BoundExpr& a, const BoundExpr& b) { return compare(a, b) == 0; }
    friend bool operator<(const BoundExpr& a, const BoundExpr& b) { return compare(a, b) < 0; }
    friend bool operator<=(const BoundExpr& a, const BoundExpr& b) { return compare(a, b) <= 0; }

    std::string str() const {
        if (is_rational()) return rat_str(value());
        std::string s = r0 == 0 ? "" : rat_str(r0) + " + ";
        if (r1 != 1) s += rat_str(r1) + "*";
        return s + "log_" + std::to_string(p) + "(" + rat_str(x) + ")";
    }
};

inline BoundExpr max_bound(const BoundExpr& a, const BoundExpr& b) { return compare(a, b) >= 0 ? a : b; }

// Ramification bound on G_inf: max(1, h p^n / (p - 1)).
inline Rational bound_Ginf(std::uint64_t h, int n, std::uint64_t p) {
    require_odd_prime(p);
    if (n < 1) throw DomainError("bound_Ginf: n >= 1");
    const Rational b = Rational(h) * detail::rat_pow(Rational(p), n) / (p - 1);
    return b > 1 ? b : Rational(1);
}

struct GKConstants {
    Rational s0 = 1;  // tame preset
    Rational c0 = 0;
};

enum class GKVariant { General, Tame, RefinedTame };

/**
 * c(K) + e max(1/(p - 1), n + log_p(h/e)) with c(K) = 1 + e/(p - 1) + e s0 + c0.
 * Tame: s0 = 1, c0 = 0. RefinedTame (h >= e): c(K) = 1 + e/(p - 1).
 */
inline BoundExpr bound_GK(std::uint64_t h, int n, std::uint64_t e, std::uint64_t p, GKVariant variant = GKVariant::General,
                          GKConstants k = {}) {
    require_odd_prime(p);
    if (h < 1 || e < 1) throw DomainError("bound_GK: h >= 1 and e >= 1");
    const Rational E(e);
    Rational c;
    switch (variant) {
        case GKVariant::General: c = 1 + E / (p - 1) + E * k.s0 + k.c0; break;
        case GKVariant::Tame: c = 1 + E + E / (p - 1); break;
        case GKVariant::RefinedTame:
            if (h < e) throw DomainError("bound_GK: the refined constant needs h >= e");
            c = 1 + E / (p - 1);
            break;
    }
    const BoundExpr tame{p, c + E / (p - 1), 0, 1};
    const BoundExpr wild{p, c + E * n, E, Rational(h) / E};
    return max_bound(tame, wild);
}

struct ConverseBound {
    BoundExpr mu_threshold;   // G_K^(mu) trivial beyond this
    std::uint64_t height;      // u-height of the resulting lattice
    std::uint64_t u_valuation; // v_R(U mod p) at which U-height <= n holds for n-torsion
};

inline ConverseBound bound_converse(std::uint64_t h, std::uint64_t e, std::uint64_t p) {
    require_odd_prime(p);
    if (h < 1 || e < 1) throw DomainError("bound_converse: h >= 1 and e >= 1");
    const Rational E(e);
    return {{p, 1 + E / (p - 1) + E, E, Rational(h) / E}, h * p, h * p};
}

// The G_inf version of the converse: threshold h p / (p - 1).
inline Rational bound_converse_Ginf(std::uint64_t h, std::uint64_t p) {
    require_odd_prime(p);
    return Rational(h * p, p - 1);
}

struct SemistableBound {
    std::int64_t alpha;
    Rational beta;
    Rational bound;
};

/**
 * 1 + e(n + alpha) + max(e beta - p^{-(n + alpha)}, e/(p - 1)) where
 * r/(p - 1) = p^alpha beta with 1/p < beta <= 1.
 */
inline SemistableBound bound_semistable(std::uint64_t r, int n, std::uint64_t e, std::uint64_t p) {
    require_odd_prime(p);
    if (r < 1 || n < 1 || e < 1) throw DomainError("bound_semistable: r, n, e >= 1");
    const Rational q(r, p - 1);
    std::int64_t alpha = 0;
    while (q / detail::rat_pow(Rational(p), alpha) > 1) ++alpha;
    const Rational beta = q / detail::rat_pow(Rational(p), alpha);
    const Rational E(e);
    const Rational a = E * beta - detail::rat_pow(Rational(p), -(n + alpha));
    const Rational b = E / (p - 1);
    return {alpha, beta, 1 + E * (n + alpha) + (a > b ? a : b)};
}

// Least integer s0 >= log_p(h) + c'.
inline std::int64_t bound_tau_congruence(std::uint64_t h, const Rational& cprime, std::uint64_t p) {
    require_odd_prime(p);
    if (h < 1) throw DomainError("bound_tau_congruence: h >= 1");
    const BoundExpr target{p, cprime, 1, Rational(h)};
    std::int64_t s = static_cast<std::int64_t>(numerator(floor_rat(cprime)));
    while (BoundExpr::rational(p, s) < target) ++s;
    while (target <= BoundExpr::rational(p, s - 1)) --s;
    return s;
}

struct GammaBound {
    Rational value;
    bool clamped;
};

// 1 + e s - c0, clamped at 0.
inline GammaBound gamma_lower_bound(int s, std::uint64_t e, const Rational& c0) {
    if (s < 0) throw DomainError("gamma_lower_bound: s >= 0");
    const Rational v = 1 + Rational(e) * s - c0;
    return v < 0 ? GammaBound{0, true} : GammaBound{v, false};
}

}  // namespace phitau
