#pragma once

#include "linalg.hpp"

namespace phitau {

// F_{p^n} as an n-dimensional F_p-vector space in the power basis.
inline std::vector<Fq> fp_coords(const Fq& x) {
    const FqField* P = gf(x.prime(), 1);
    std::vector<Fq> v;
    for (int i = 0; i < x.degree(); ++i) v.emplace_back(P, static_cast<std::int64_t>(x.coeff(i)));
    return v;
}

inline Fq from_fp_coords(const FqField* F, const std::vector<Fq>& v) {
    Fq x(F);
    for (int i = 0; i < F->n; ++i) x.set_coeff(i, v[i].coeff(0));
    return x;
}

// Matrix over F_p of an F_p-linear map F -> F.
template <class Fn>
Matrix<Fq> fp_linear_map(const FqField* F, Fn f) {
    const FqField* P = gf(F->p, 1);
    Matrix<Fq> M(F->n, F->n, Fq(P));
    for (int j = 0; j < F->n; ++j) {
        Fq e(F);
        e.set_coeff(j, 1);
        auto col = fp_coords(f(e));
        for (int i = 0; i < F->n; ++i) M(i, j) = col[i];
    }
    return M;
}

/**
 * The F_p-linear solutions of y^p = a y in F, as an F_p-basis of the kernel
 * of y -> y^p - a y.
 */
inline std::vector<Fq> frobenius_eigenline(const Fq& a) {
    const FqField* F = a.field();
    Matrix<Fq> M = fp_linear_map(F, [&](const Fq& y) { return y.frobenius() - a * y; });
    std::vector<Fq> out;
    for (auto& v : nullspace(M)) out.push_back(from_fp_coords(F, v));
    return out;
}

// Some y with y^p - a y = b, or nothing.
inline std::optional<Fq> solve_frobenius_affine(const Fq& a, const Fq& b) {
    const FqField* F = a.field();
    Matrix<Fq> M = fp_linear_map(F, [&](const Fq& y) { return y.frobenius() - a * y; });
    auto sol = solve(M, fp_coords(b));
    if (!sol) return std::nullopt;
    return from_fp_coords(F, *sol);
}

/**
 * The embedding F_{p^k} -> F_{p^n} (k | n) sending the generator of the
 * small field to the least root, in enumeration order, of its modulus.
 */
class FqEmbedding {
public:
    FqEmbedding(const FqField* from, const FqField* to) : from_(from), to_(to) {
        if (from->p != to->p || to->n % from->n != 0) throw DomainError("no embedding " + from->name() + " -> " + to->name());
        if (from->n == 1) {
            root_ = Fq::zero(to);
        } else {
            // the subfield fixed by Frob^k, enumerated through an F_p-basis
            const int k = from->n;
            Matrix<Fq> M = fp_linear_map(to, [&](const Fq& y) { return y.frobenius(k) - y; });
            auto basis = nullspace(M);
            if (static_cast<int>(basis.size()) != k) throw Error("subfield of unexpected dimension");
            std::vector<Fq> sub;
            for (auto& v : basis) sub.push_back(from_fp_coords(to, v));
            const std::uint64_t count = ipow(to->p, k);
            if (count > 1000000) throw Unsupported("subfield too large to search for a root");
            bool found = false;
            for (std::uint64_t t = 0; t < count && !found; ++t) {
                Fq y(to);
                std::uint64_t r = t;
                for (int i = 0; i < k; ++i) {
                    y = y + sub[i].scaled(static_cast<std::uint32_t>(r % to->p));
                    r /= to->p;
                }
                Fq val(to), yi = Fq::one(to);
                for (std::size_t i = 0; i < from->modulus.size(); ++i) {
                    val = val + yi.scaled(from->modulus[i]);
                    yi = yi * y;
                }
                if (val.is_zero() && (!found || y < root_)) {
                    root_ = y;
                    found = true;
                }
            }
            if (!found) throw Error("no root of the subfield modulus");
        }
        powers_.push_back(Fq::one(to));
        for (int i = 1; i < from->n; ++i) powers_.push_back(powers_.back() * root_);
    }

    const FqField* source() const { return from_; }
    const FqField* target() const { return to_; }

    Fq operator()(const Fq& x) const {
        if (x.field() != from_) throw DomainError("embedding applied outside its source");
        Fq y(to_);
        for (int i = 0; i < from_->n; ++i) y = y + powers_[i].scaled(x.coeff(i));
        return y;
    }

    std::optional<Fq> preimage(const Fq& y) const {
        const FqField* P = gf(to_->p, 1);
        Matrix<Fq> M(to_->n, from_->n, Fq(P));
        for (int j = 0; j < from_->n; ++j) {
            auto col = fp_coords(powers_[j]);
            for (int i = 0; i < to_->n; ++i) M(i, j) = col[i];
        }
        auto sol = solve(M, fp_coords(y));
        if (!sol) return std::nullopt;
        return from_fp_coords(from_, *sol);
    }

private:
    const FqField* from_;
    const FqField* to_;
    Fq root_;
    std::vector<Fq> powers_;
};

// Interned embedding between two interned fields.
inline const FqEmbedding& embedding(const FqField* from, const FqField* to) {
    static std::mutex mu;
    static std::map<std::pair<const FqField*, const FqField*>, std::unique_ptr<FqEmbedding>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{from, to}];
    if (!slot) slot = std::make_unique<FqEmbedding>(from, to);
    return *slot;
}

}  // namespace phitau
