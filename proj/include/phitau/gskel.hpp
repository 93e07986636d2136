#pragma once

#include "padic.hpp"

namespace phitau {

/**
 * An element of G_K/H_inf seen through the pair (c, chi): g(pi_s) =
 * zeta^{c(g)} pi_s and g(zeta) = zeta^{chi(g)}. The law is that of
 * Z_p x| Z_p^x,
 *
 *   (c1, chi1)(c2, chi2) = (c1 + chi1 c2, chi1 chi2).
 *
 * Elements with c = 0 form the image of G_inf.
 */
struct GaloisElt {
    PadicInt c;
    PadicUnit chi;

    GaloisElt(PadicInt c_, PadicUnit chi_) : c(std::move(c_)), chi(std::move(chi_)) {
        if (c.prime() != chi.prime()) throw DomainError("GaloisElt: mismatched primes");
        require_unit(chi, "chi(g)");
    }

    static GaloisElt identity(std::uint64_t p, int N) { return {PadicInt(p, N, 0), PadicInt(p, N, 1)}; }

    std::uint64_t prime() const { return c.prime(); }
    int precision() const { return std::min(c.precision(), chi.precision()); }
    bool in_Ginf() const { return c.is_zero(); }

    friend GaloisElt operator*(const GaloisElt& g, const GaloisElt& h) {
        if (g.prime() != h.prime()) throw DomainError("GaloisElt: mismatched primes");
        return {g.c + g.chi * h.c, g.chi * h.chi};
    }

    GaloisElt inverse() const {
        PadicUnit ci = chi.inverse();
        return {-(ci * c), ci};
    }

    friend bool operator==(const GaloisElt& g, const GaloisElt& h) { return g.c == h.c && g.chi == h.chi; }

    std::string str() const { return "(" + c.str() + ", " + chi.str() + ")"; }
};

// q^a = exp(a log q) for q = 1 mod p and a in Z_p.
inline PadicUnit unit_power(const PadicUnit& q, const PadicInt& a) {
    require_one_mod_p(q, "base");
    const int N = std::min(q.precision(), a.precision());
    return exp_unit(a.with_precision(N) * log_unit(q.with_precision(N)));
}

/**
 * g^a for a in Z_p, namely (c [a]_chi, chi^a). Only defined on the pro-p
 * part, chi(g) = 1 mod p.
 */
inline GaloisElt pow(const GaloisElt& g, const PadicInt& a) {
    if ((g.chi - 1).valuation() < 1) throw DomainError("pow: chi(g) must be 1 mod p");
    return {g.c * q_analogue(a, g.chi), unit_power(g.chi, a)};
}

/**
 * Write g = tau^a g' with g' in G_inf; requires c(tau) = 1. The exponent is
 * the inverse q-analogue of c(g) in base chi(tau).
 */
inline std::pair<PadicInt, GaloisElt> decompose(const GaloisElt& g, const GaloisElt& tau) {
    if (!(tau.c == PadicInt(tau.prime(), tau.precision(), 1))) throw DomainError("decompose: c(tau) must be 1");
    PadicInt a = q_analogue_inverse(g.c, tau.chi);
    GaloisElt gp = pow(tau, a).inverse() * g;
    return {a, gp};
}

// tau^{-chi_tau(g)} g tau, which again lies in G_inf.
inline GaloisElt conj_into_Ginf(const GaloisElt& g, const GaloisElt& tau) {
    if (!g.in_Ginf()) throw DomainError("conj_into_Ginf: c(g) must be 0");
    PadicInt b = chi_tau(g.chi, tau.chi);
    return pow(tau, -b) * g * tau;
}

/**
 * The same group written as pairs (a, g) standing for tau^a g with g in
 * G_inf, stored through chi(g). Multiplication moves tau^b across g:
 * g tau^b = tau^{b'} psi_b(g), with [b']_{chi(tau)} = chi(g) [b]_{chi(tau)}.
 * When chi(tau) = 1 this is b' = b chi(g) and psi_b(g) = g.
 */
struct SemidirectElt {
    PadicInt a;
    PadicUnit chi;
};

inline SemidirectElt to_semidirect(const GaloisElt& g, const GaloisElt& tau) {
    auto [a, gp] = decompose(g, tau);
    return {a, gp.chi};
}

inline GaloisElt from_semidirect(const SemidirectElt& x, const GaloisElt& tau) {
    const std::uint64_t p = x.a.prime();
    return pow(tau, x.a) * GaloisElt(PadicInt(p, x.chi.precision(), 0), x.chi);
}

inline SemidirectElt semidirect_mul(const SemidirectElt& x, const SemidirectElt& y, const GaloisElt& tau) {
    const PadicInt bq = q_analogue(y.a, tau.chi);
    const PadicInt bp = q_analogue_inverse(x.chi * bq, tau.chi);
    // psi_b(g) = tau^{-b'} g tau^b has c = 0; only its chi is needed.
    const PadicUnit psi_chi = unit_power(tau.chi, -bp) * x.chi * unit_power(tau.chi, y.a);
    return {x.a + bp, psi_chi * y.chi};
}

}  // namespace phitau
