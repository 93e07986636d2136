#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace phitau {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr int kInfinity = std::numeric_limits<int>::max();

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Preconditions of an operation are violated.
struct DomainError : Error {
    using Error::Error;
};
// Not enough p-adic or u-adic digits left to certify an answer.
struct PrecisionError : Error {
    using Error::Error;
};
struct NotDivisible : Error {
    using Error::Error;
};
struct ExtensionTooSmall : Error {
    using Error::Error;
};
struct LatticeTooCoarse : Error {
    using Error::Error;
};
struct ExtensionCapExceeded : Error {
    using Error::Error;
};
struct Unsupported : Error {
    using Error::Error;
};

// Three-valued answer for decision procedures that work at truncation.
enum class Verdict { False = 0, True = 1, Indeterminate = 2 };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::True: return "true";
        case Verdict::False: return "false";
        default: return "indeterminate";
    }
}

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline void require_odd_prime(std::uint64_t p) {
    if (p == 2) throw DomainError("p = 2 is not supported");
    if (!is_prime(p)) throw DomainError("p must be an odd prime, got " + std::to_string(p));
}

inline std::uint64_t ipow(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

inline BigInt bigpow(const BigInt& b, unsigned e) { return boost::multiprecision::pow(b, e); }

// p-adic valuation of a nonzero integer.
inline int vp(BigInt n, std::uint64_t p) {
    if (n == 0) return kInfinity;
    if (n < 0) n = -n;
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

inline int vp(std::int64_t n, std::uint64_t p) { return vp(BigInt(n), p); }

inline int vp(const Rational& r, std::uint64_t p) {
    if (r == 0) return kInfinity;
    return vp(BigInt(numerator(r)), p) - vp(BigInt(denominator(r)), p);
}

// v_p(n!) by Legendre.
inline int vp_factorial(std::uint64_t n, std::uint64_t p) {
    int v = 0;
    while (n) {
        n /= p;
        v += static_cast<int>(n);
    }
    return v;
}

// floor(log_p n) for n >= 1.
inline int floor_log(std::uint64_t n, std::uint64_t p) {
    int l = 0;
    while (n >= p) {
        n /= p;
        ++l;
    }
    return l;
}

inline BigInt mod_floor(const BigInt& a, const BigInt& m) {
    BigInt r = a % m;
    if (r < 0) r += m;
    return r;
}

inline Rational floor_rat(const Rational& r) {
    BigInt n = numerator(r), d = denominator(r);
    BigInt q = n / d;
    if (n < 0 && q * d != n) q -= 1;
    return Rational(q);
}

inline BigInt ceil_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    if ((a % b != 0) && ((a < 0) == (b < 0))) q += 1;
    return q;
}

inline std::string rat_str(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

// Deterministic generator; uniform draws use plain modular reduction so the
// stream does not depend on the standard library's distribution code.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    std::uint64_t next() { return gen_(); }
    std::uint64_t below(std::uint64_t n) { return n ? gen_() % n : 0; }
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }
    bool coin() { return gen_() & 1; }

private:
    std::mt19937_64 gen_;
};

}  // namespace phitau
