#pragma once

#include "common.hpp"
#include "fq.hpp"
#include "padic.hpp"

namespace phitau {

/**
 * Uniform access to constants of a coefficient ring. Elements of our rings
 * carry their parameters (field, prime, precision), so constants are built
 * from an existing element "like" them.
 */
template <class T>
struct RingTraits;

template <>
struct RingTraits<Fq> {
    static Fq zero(const Fq& like) { return Fq::zero(like.field()); }
    static Fq one(const Fq& like) { return Fq::one(like.field()); }
    static Fq from_int(const Fq& like, std::int64_t k) { return Fq(like.field(), k); }
    static Fq from_big(const Fq& like, const BigInt& k) {
        return Fq(like.field(), static_cast<std::int64_t>(mod_floor(k, BigInt(like.prime()))));
    }
    static bool is_zero(const Fq& x) { return x.is_zero(); }
    static bool is_unit(const Fq& x) { return !x.is_zero(); }
    // Smallest k with p^k = 0 in the ring (1 for fields of characteristic p).
    static int p_nilpotency(const Fq&) { return 1; }
    static Fq frobenius(const Fq& x) { return x.frobenius(); }
    static Fq inverse(const Fq& x) { return x.inverse(); }
    static std::string str(const Fq& x) { return x.str(); }
};

template <>
struct RingTraits<PadicInt> {
    static PadicInt zero(const PadicInt& like) { return PadicInt(like.prime(), like.precision(), 0); }
    static PadicInt one(const PadicInt& like) { return PadicInt(like.prime(), like.precision(), 1); }
    static PadicInt from_int(const PadicInt& like, std::int64_t k) { return PadicInt(like.prime(), like.precision(), k); }
    static PadicInt from_big(const PadicInt& like, const BigInt& k) { return PadicInt::from_big(like.prime(), like.precision(), k); }
    static bool is_zero(const PadicInt& x) { return x.is_zero(); }
    static bool is_unit(const PadicInt& x) { return x.is_unit(); }
    static int p_nilpotency(const PadicInt& x) { return x.precision(); }
    static PadicInt frobenius(const PadicInt& x) { return x; }
    static PadicInt inverse(const PadicInt& x) { return x.inverse(); }
    static std::string str(const PadicInt& x) { return std::to_string(x.residue()); }
};

template <>
struct RingTraits<Rational> {
    static Rational zero(const Rational&) { return 0; }
    static Rational one(const Rational&) { return 1; }
    static Rational from_int(const Rational&, std::int64_t k) { return k; }
    static Rational from_big(const Rational&, const BigInt& k) { return Rational(k); }
    static bool is_zero(const Rational& x) { return x == 0; }
    static bool is_unit(const Rational& x) { return x != 0; }
    static int p_nilpotency(const Rational&) { return 1; }
    static Rational frobenius(const Rational& x) { return x; }
    static Rational inverse(const Rational& x) {
        if (x == 0) throw DomainError("division by zero");
        return 1 / x;
    }
    static std::string str(const Rational& x) { return rat_str(x); }
};

}  // namespace phitau
