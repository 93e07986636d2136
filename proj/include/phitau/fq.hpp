#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <vector>

#include "common.hpp"

namespace phitau {

inline constexpr int kFqMaxDegree = 64;

namespace detail {

using Poly = std::vector<std::uint32_t>;  // coefficients mod p, low degree first

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, std::uint32_t p) {
    if (a.empty() || b.empty()) return {};
    std::vector<std::uint64_t> r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + std::uint64_t(a[i]) * b[j]) % p;
    }
    const std::size_t n = f.size() - 1;
    for (std::size_t k = r.size(); k-- > n;) {
        std::uint64_t c = r[k] % p;
        if (!c) continue;
        for (std::size_t j = 0; j <= n; ++j) r[k - n + j] = (r[k - n + j] + (p - c) * f[j]) % p;
    }
    Poly out(std::min(r.size(), n));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<std::uint32_t>(r[i] % p);
    trim(out);
    return out;
}

inline Poly poly_mod(Poly a, const Poly& f, std::uint32_t p) {
    trim(a);
    const std::size_t n = f.size() - 1;
    std::uint64_t lead_inv = 1;
    {
        std::uint64_t b = f.back(), e = p - 2;
        while (e) {
            if (e & 1) lead_inv = lead_inv * b % p;
            b = b * b % p;
            e >>= 1;
        }
    }
    while (a.size() > n) {
        std::uint64_t c = a.back() * lead_inv % p;
        std::size_t shift = a.size() - 1 - n;
        for (std::size_t j = 0; j <= n; ++j) a[shift + j] = static_cast<std::uint32_t>((a[shift + j] + (p - c) * f[j]) % p);
        trim(a);
    }
    return a;
}

inline Poly poly_gcd(Poly a, Poly b, std::uint32_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = poly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

inline Poly poly_powmod(Poly base, BigInt e, const Poly& f, std::uint32_t p) {
    Poly r{1};
    while (e > 0) {
        if ((e & 1) != 0) r = poly_mulmod(r, base, f, p);
        base = poly_mulmod(base, base, f, p);
        e >>= 1;
    }
    return r;
}

// Ben-Or: f of degree n is irreducible iff gcd(f, x^{p^i} - x) = 1 for i <= n/2.
inline bool is_irreducible(const Poly& f, std::uint32_t p) {
    const std::size_t n = f.size() - 1;
    Poly xp{0, 1};
    for (std::size_t i = 1; i <= n / 2; ++i) {
        xp = poly_powmod(xp, BigInt(p), f, p);
        Poly g = xp;
        if (g.size() < 2) g.resize(2, 0);
        g[1] = (g[1] + p - 1) % p;
        trim(g);
        Poly d = poly_gcd(f, g, p);
        if (d.size() > 1) return false;
    }
    return true;
}

}  // namespace detail

/**
 * F_{p^n} presented as F_p[x]/(f) with f the first monic irreducible of
 * degree n in the enumeration order "constant coefficient varies fastest".
 * Fields are interned; a FqField pointer stays valid for the whole process.
 */
struct FqField {
    std::uint32_t p = 0;
    int n = 0;
    detail::Poly modulus;                 // monic, size n + 1
    std::vector<detail::Poly> frob_image;  // (x^i)^p reduced, i < n
    BigInt order;                          // p^n

    std::string name() const {
        return n == 1 ? "F_" + std::to_string(p) : "F_" + std::to_string(p) + "^" + std::to_string(n);
    }
};

namespace detail {

inline std::unique_ptr<FqField> build_field(std::uint32_t p, int n) {
    auto F = std::make_unique<FqField>();
    F->p = p;
    F->n = n;
    F->order = bigpow(BigInt(p), n);
    if (n == 1) {
        F->modulus = {0, 1};
    } else {
        Poly f(n + 1, 0);
        f[n] = 1;
        BigInt count = bigpow(BigInt(p), n);
        bool found = false;
        for (BigInt k = 0; k < count && !found; ++k) {
            BigInt t = k;
            for (int i = 0; i < n; ++i) {
                f[i] = static_cast<std::uint32_t>(t % p);
                t /= p;
            }
            if (f[0] == 0) continue;
            found = is_irreducible(f, p);
        }
        if (!found) throw Error("no irreducible polynomial found");
        F->modulus = f;
    }
    for (int i = 0; i < n; ++i) {
        Poly xi(i + 1, 0);
        xi[i] = 1;
        F->frob_image.push_back(n == 1 ? Poly{1} : poly_powmod(xi, BigInt(p), F->modulus, p));
    }
    return F;
}

}  // namespace detail

// The interned field F_{p^n}.
inline const FqField* gf(std::uint32_t p, int n) {
    static std::mutex mu;
    static std::map<std::pair<std::uint32_t, int>, std::unique_ptr<FqField>> registry;
    require_odd_prime(p);
    if (p >= (1u << 16)) throw DomainError("characteristic must fit in 16 bits");
    if (n < 1 || n > kFqMaxDegree) throw ExtensionCapExceeded("field degree " + std::to_string(n) + " exceeds the cap " + std::to_string(kFqMaxDegree));
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = registry[{p, n}];
    if (!slot) slot = detail::build_field(p, n);
    return slot.get();
}

class Fq {
public:
    Fq() = default;
    explicit Fq(const FqField* F) : F_(F) { c_.fill(0); }
    Fq(const FqField* F, std::int64_t k) : Fq(F) {
        std::int64_t r = k % static_cast<std::int64_t>(F->p);
        c_[0] = static_cast<std::uint16_t>(r < 0 ? r + F->p : r);
    }

    static Fq zero(const FqField* F) { return Fq(F); }
    static Fq one(const FqField* F) { return Fq(F, 1); }
    // The class of x.
    static Fq gen(const FqField* F) {
        Fq g(F);
        if (F->n == 1) return Fq(F, 0);
        g.c_[1] = 1;
        return g;
    }
    static Fq from_coeffs(const FqField* F, const std::vector<std::uint32_t>& c) {
        Fq a(F);
        for (std::size_t i = 0; i < c.size() && i < static_cast<std::size_t>(F->n); ++i) a.c_[i] = static_cast<std::uint16_t>(c[i] % F->p);
        return a;
    }
    static Fq random(const FqField* F, Rng& rng) {
        Fq a(F);
        for (int i = 0; i < F->n; ++i) a.c_[i] = static_cast<std::uint16_t>(rng.below(F->p));
        return a;
    }
    static Fq random_nonzero(const FqField* F, Rng& rng) {
        for (;;) {
            Fq a = random(F, rng);
            if (!a.is_zero()) return a;
        }
    }

    const FqField* field() const { return F_; }
    std::uint32_t prime() const { return F_->p; }
    int degree() const { return F_->n; }
    std::uint32_t coeff(int i) const { return c_[i]; }
    void set_coeff(int i, std::uint32_t v) { c_[i] = static_cast<std::uint16_t>(v % F_->p); }

    bool is_zero() const {
        for (int i = 0; i < F_->n; ++i)
            if (c_[i]) return false;
        return true;
    }
    bool is_one() const {
        if (c_[0] != 1) return false;
        for (int i = 1; i < F_->n; ++i)
            if (c_[i]) return false;
        return true;
    }
    // True when the element lies in the prime field.
    bool in_prime_field() const {
        for (int i = 1; i < F_->n; ++i)
            if (c_[i]) return false;
        return true;
    }

    friend Fq operator+(const Fq& a, const Fq& b) {
        same(a, b);
        Fq r(a.F_);
        const std::uint32_t p = a.F_->p;
        for (int i = 0; i < a.F_->n; ++i) {
            std::uint32_t s = std::uint32_t(a.c_[i]) + b.c_[i];
            r.c_[i] = static_cast<std::uint16_t>(s >= p ? s - p : s);
        }
        return r;
    }
    friend Fq operator-(const Fq& a, const Fq& b) {
        same(a, b);
        Fq r(a.F_);
        const std::uint32_t p = a.F_->p;
        for (int i = 0; i < a.F_->n; ++i) {
            std::uint32_t s = std::uint32_t(a.c_[i]) + p - b.c_[i];
            r.c_[i] = static_cast<std::uint16_t>(s >= p ? s - p : s);
        }
        return r;
    }
    Fq operator-() const { return Fq(F_) - *this; }

    friend Fq operator*(const Fq& a, const Fq& b) {
        same(a, b);
        const FqField* F = a.F_;
        const int n = F->n;
        const std::uint32_t p = F->p;
        if (n == 1) return Fq(F, std::int64_t(std::uint64_t(a.c_[0]) * b.c_[0] % p));
        std::array<std::uint64_t, 2 * kFqMaxDegree> r{};
        for (int i = 0; i < n; ++i) {
            if (!a.c_[i]) continue;
            for (int j = 0; j < n; ++j) r[i + j] += std::uint64_t(a.c_[i]) * b.c_[j];
        }
        for (int k = 0; k < 2 * n - 1; ++k) r[k] %= p;
        const auto& f = F->modulus;
        for (int k = 2 * n - 2; k >= n; --k) {
            std::uint64_t c = r[k] % p;
            if (!c) continue;
            for (int j = 0; j < n; ++j) r[k - n + j] = (r[k - n + j] + (p - c) * f[j]) % p;
            r[k] = 0;
        }
        Fq out(F);
        for (int i = 0; i < n; ++i) out.c_[i] = static_cast<std::uint16_t>(r[i] % p);
        return out;
    }

    Fq& operator+=(const Fq& o) { return *this = *this + o; }
    Fq& operator-=(const Fq& o) { return *this = *this - o; }
    Fq& operator*=(const Fq& o) { return *this = *this * o; }

    Fq scaled(std::uint32_t k) const {
        Fq r(F_);
        for (int i = 0; i < F_->n; ++i) r.c_[i] = static_cast<std::uint16_t>(std::uint64_t(c_[i]) * k % F_->p);
        return r;
    }

    friend bool operator==(const Fq& a, const Fq& b) {
        if (a.F_ != b.F_) return false;
        for (int i = 0; i < a.F_->n; ++i)
            if (a.c_[i] != b.c_[i]) return false;
        return true;
    }
    friend bool operator!=(const Fq& a, const Fq& b) { return !(a == b); }
    // Order of the integers sum c_i p^i; used only to fix output order.
    friend bool operator<(const Fq& a, const Fq& b) {
        for (int i = a.F_->n; i-- > 0;)
            if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
        return false;
    }

    Fq pow(BigInt e) const {
        if (e < 0) return inverse().pow(-e);
        Fq r = one(F_), b = *this;
        while (e > 0) {
            if ((e & 1) != 0) r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }
    Fq pow(std::int64_t e) const { return pow(BigInt(e)); }

    // x -> x^p, linear over F_p.
    Fq frobenius() const {
        if (F_->n == 1) return *this;
        Fq r(F_);
        const std::uint32_t p = F_->p;
        std::array<std::uint64_t, kFqMaxDegree> acc{};
        for (int i = 0; i < F_->n; ++i) {
            if (!c_[i]) continue;
            const auto& img = F_->frob_image[i];
            for (std::size_t j = 0; j < img.size(); ++j) acc[j] += std::uint64_t(c_[i]) * img[j];
        }
        for (int j = 0; j < F_->n; ++j) r.c_[j] = static_cast<std::uint16_t>(acc[j] % p);
        return r;
    }
    Fq frobenius(int k) const {
        Fq r = *this;
        k %= F_->n;
        if (k < 0) k += F_->n;
        for (int i = 0; i < k; ++i) r = r.frobenius();
        return r;
    }
    // Unique p-th root (the field is perfect).
    Fq pth_root() const { return frobenius(F_->n - 1); }

    Fq inverse() const {
        if (is_zero()) throw DomainError("inverse of zero in " + F_->name());
        const std::uint32_t p = F_->p;
        if (F_->n == 1) return pow(BigInt(p - 2));
        // extended Euclid on F_p[x]
        using detail::Poly;
        Poly r0 = F_->modulus, r1(c_.begin(), c_.begin() + F_->n);
        detail::trim(r1);
        Poly s0{}, s1{1};
        auto inv_mod = [p](std::uint64_t a) {
            std::uint64_t r = 1, e = p - 2;
            while (e) {
                if (e & 1) r = r * a % p;
                a = a * a % p;
                e >>= 1;
            }
            return r;
        };
        while (r1.size() > 1) {
            // q = r0 / r1
            Poly q(r0.size() - r1.size() + 1, 0), rem = r0;
            std::uint64_t li = inv_mod(r1.back());
            const std::ptrdiff_t d1 = static_cast<std::ptrdiff_t>(r1.size()) - 1;
            for (std::ptrdiff_t k = static_cast<std::ptrdiff_t>(rem.size()) - 1; k >= d1; --k) {
                std::uint64_t c = rem[k] * li % p;
                if (!c) continue;
                const std::ptrdiff_t shift = k - d1;
                q[shift] = static_cast<std::uint32_t>(c);
                for (std::size_t j = 0; j < r1.size(); ++j)
                    rem[shift + j] = static_cast<std::uint32_t>((rem[shift + j] + (p - c) * r1[j]) % p);
            }
            detail::trim(rem);
            // s2 = s0 - q s1
            Poly qs(q.size() + s1.size(), 0);
            for (std::size_t i = 0; i < q.size(); ++i)
                for (std::size_t j = 0; j < s1.size(); ++j) qs[i + j] = static_cast<std::uint32_t>((qs[i + j] + std::uint64_t(q[i]) * s1[j]) % p);
            Poly s2(std::max(s0.size(), qs.size()), 0);
            for (std::size_t i = 0; i < s2.size(); ++i) {
                std::uint64_t a = i < s0.size() ? s0[i] : 0, b = i < qs.size() ? qs[i] : 0;
                s2[i] = static_cast<std::uint32_t>((a + p - b) % p);
            }
            detail::trim(s2);
            r0 = std::move(r1);
            r1 = std::move(rem);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        std::uint64_t c = inv_mod(r1[0]);
        Fq out(F_);
        Poly s = detail::poly_mod(s1, F_->modulus, p);
        for (std::size_t i = 0; i < s.size(); ++i) out.c_[i] = static_cast<std::uint16_t>(s[i] * c % p);
        return out;
    }

    Fq operator/(const Fq& o) const { return *this * o.inverse(); }

    std::string str() const {
        if (F_->n == 1) return std::to_string(c_[0]);
        std::string s = "[";
        for (int i = 0; i < F_->n; ++i) s += (i ? "," : "") + std::to_string(c_[i]);
        return s + "]";
    }
    friend std::ostream& operator<<(std::ostream& os, const Fq& a) { return os << a.str(); }

private:
    static void same(const Fq& a, const Fq& b) {
        if (a.F_ != b.F_) throw DomainError("mixing elements of different fields");
    }

    const FqField* F_ = nullptr;
    std::array<std::uint16_t, kFqMaxDegree> c_{};
};

// All elements of a (small) field, ordered by the integer encoding sum c_i p^i.
inline std::vector<Fq> all_elements(const FqField* F) {
    if (F->order > 1000000) throw Unsupported("enumeration of " + F->name() + " is too large");
    std::vector<Fq> out;
    const std::uint64_t N = static_cast<std::uint64_t>(F->order);
    out.reserve(N);
    for (std::uint64_t k = 0; k < N; ++k) {
        Fq a(F);
        std::uint64_t t = k;
        for (int i = 0; i < F->n; ++i) {
            a.set_coeff(i, static_cast<std::uint32_t>(t % F->p));
            t /= F->p;
        }
        out.push_back(a);
    }
    return out;
}

}  // namespace phitau
