#pragma once

#include "phimod.hpp"

namespace phitau {

using FqSeries = TruncSeries<Fq>;
using FqRow = std::vector<FqSeries>;  // a row vector of series

inline Matrix<Fq> frobenius(const Matrix<Fq>& A, int k = 1) {
    return A.map([k](const Fq& x) { return x.frobenius(k); });
}

// Order of A in GL_d(F), or 0 once it passes limit.
inline std::uint64_t matrix_order(const Matrix<Fq>& A, std::uint64_t limit) {
    const Matrix<Fq> I = Matrix<Fq>::identity(A.rows(), A(0, 0));
    Matrix<Fq> P = A;
    for (std::uint64_t k = 1; k <= limit; ++k) {
        if (P == I) return k;
        P = P * A;
    }
    return 0;
}

// F_p coordinates of a row vector over F_{p^m}: d m entries.
inline std::vector<Fq> fp_coords(const std::vector<Fq>& v) {
    std::vector<Fq> out;
    for (const Fq& x : v) {
        auto c = fp_coords(x);
        out.insert(out.end(), c.begin(), c.end());
    }
    return out;
}

/**
 * The solution set T(M) of x^p = x G (rows, coefficientwise p-power and
 * u -> u^p) for G over F_q[[u]] with G(0) invertible, in F_{q^s}[[u]]/u^M.
 */
struct SolutionSet {
    int s;                         // residue field is F_{q^s}
    const FqField* K;              // F_{q^s}
    std::vector<FqRow> basis;      // an F_p-basis, d elements
    std::vector<FqRow> solutions;  // all p^d of them, lexicographic on residues
};

struct UnitRootParams {
    int s_max = 0;  // largest s tried; 0 means as large as F_{q^s} allows (q^s <= p^64)
};

/**
 * With x^(p) = x G_0 on residues, x^(q) = x N for N = G_0 G_0^(p) ...
 * G_0^(p^(f-1)); the p^d residue solutions live in F_{q^s} exactly when
 * N^s = 1, so s is the order of N. Higher coefficients follow from
 * x_m G_0 = x_{m/p}^(p) - sum_{j >= 1} x_{m-j} G_j (x_{m/p} = 0 if p does
 * not divide m).
 */
inline SolutionSet solve_unit_root(const Matrix<FqSeries>& G, UnitRootParams prm = {}) {
    const int d = G.rows();
    const FqField* Fq0 = G(0, 0).zero_coeff().field();
    const std::uint32_t p = Fq0->p;
    const int f = Fq0->n;
    int M = kInfinity;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) M = std::min(M, G(i, j).precision());
    if (M == kInfinity || M < 1) throw DomainError("solve_unit_root needs a finite positive precision");
    Matrix<Fq> G0(d, d, Fq(Fq0));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            if (G(i, j).valuation() < 0) throw DomainError("solve_unit_root: G has negative exponents");
            G0(i, j) = G(i, j).coeff(0);
        }
    if (det(G0).is_zero()) throw DomainError("solve_unit_root: G(0) is not invertible");

    Matrix<Fq> N = G0;
    for (int k = 1; k < f; ++k) N = N * frobenius(G0, k);
    const int s_cap = prm.s_max ? prm.s_max : 64 / f;
    const std::uint64_t s = matrix_order(N, static_cast<std::uint64_t>(s_cap));
    if (s == 0) throw ExtensionCapExceeded("residue solutions need F_{q^s} with s > " + std::to_string(s_cap));
    const FqField* K = gf(p, f * static_cast<int>(s));
    const FqEmbedding& emb = embedding(Fq0, K);
    const int m = K->n;

    // coefficients G_j embedded in K
    std::vector<Matrix<Fq>> Gj(M, Matrix<Fq>(d, d, Fq(K)));
    for (int k = 0; k < M; ++k)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) Gj[k](i, j) = emb(G(i, j).coeff(k));
    auto G0i = inverse(Gj[0]);

    // residues: F_p-kernel of x -> x^(p) - x G_0 on K^d
    const FqField* P = gf(p, 1);
    Matrix<Fq> L(d * m, d * m, Fq(P));
    for (int a = 0; a < d; ++a)
        for (int t = 0; t < m; ++t) {
            std::vector<Fq> x(d, Fq(K));
            x[a].set_coeff(t, 1);
            std::vector<Fq> y(d, Fq(K));
            for (int j = 0; j < d; ++j) {
                y[j] = x[j].frobenius();
                for (int i = 0; i < d; ++i) y[j] = y[j] - x[i] * Gj[0](i, j);
            }
            auto col = fp_coords(y);
            for (int r = 0; r < d * m; ++r) L(r, a * m + t) = col[r];
        }
    auto ker = nullspace(L);
    if (static_cast<int>(ker.size()) != d) throw Error("residue solution space has unexpected dimension");

    auto extend = [&](const std::vector<Fq>& x0) {
        std::vector<std::vector<Fq>> x(M, std::vector<Fq>(d, Fq(K)));
        x[0] = x0;
        for (int k = 1; k < M; ++k) {
            std::vector<Fq> rhs(d, Fq(K));
            if (k % static_cast<int>(p) == 0)
                for (int j = 0; j < d; ++j) rhs[j] = x[k / p][j].frobenius();
            for (int jj = 1; jj <= k; ++jj)
                for (int a = 0; a < d; ++a)
                    for (int b = 0; b < d; ++b) rhs[b] = rhs[b] - x[k - jj][a] * Gj[jj](a, b);
            for (int b = 0; b < d; ++b) {
                x[k][b] = Fq(K);
                for (int a = 0; a < d; ++a) x[k][b] = x[k][b] + rhs[a] * (*G0i)(a, b);
            }
        }
        FqRow row;
        for (int b = 0; b < d; ++b) {
            std::vector<Fq> c;
            for (int k = 0; k < M; ++k) c.push_back(x[k][b]);
            row.push_back(FqSeries::from_coeffs(Fq(K), c, 0, M));
        }
        return row;
    };

    SolutionSet out{static_cast<int>(s), K, {}, {}};
    std::vector<std::vector<Fq>> basis_res;
    for (auto& v : ker) {
        std::vector<Fq> x0(d, Fq(K));
        for (int a = 0; a < d; ++a)
            for (int t = 0; t < m; ++t) x0[a].set_coeff(t, v[a * m + t].coeff(0));
        basis_res.push_back(x0);
        out.basis.push_back(extend(x0));
    }
    std::vector<std::vector<Fq>> residues;
    const std::uint64_t count = ipow(p, d);
    for (std::uint64_t t = 0; t < count; ++t) {
        std::vector<Fq> x0(d, Fq(K));
        std::uint64_t r = t;
        for (int i = 0; i < d; ++i) {
            const std::uint32_t c = static_cast<std::uint32_t>(r % p);
            r /= p;
            for (int a = 0; a < d; ++a) x0[a] = x0[a] + basis_res[i][a].scaled(c);
        }
        residues.push_back(x0);
    }
    std::sort(residues.begin(), residues.end());
    for (auto& x0 : residues) out.solutions.push_back(extend(x0));
    return out;
}

// x^p - x G for a row x, by direct substitution.
inline FqRow unit_root_residual(const FqRow& x, const Matrix<FqSeries>& G) {
    const int d = G.rows();
    const FqField* K = x[0].zero_coeff().field();
    const FqEmbedding& emb = embedding(G(0, 0).zero_coeff().field(), K);
    FqRow r;
    for (int b = 0; b < d; ++b) {
        FqSeries acc = x[b].frobenius(K->p);
        for (int a = 0; a < d; ++a) acc = acc - x[a] * G(a, b).map([&](const Fq& c) { return emb(c); });
        r.push_back(acc);
    }
    return r;
}

/**
 * Matrix over F_p of x -> x^(q) (coefficientwise q-power, u fixed) on the
 * solution basis: sigma(b_j) = sum_i b_i A_ij. Solutions are determined by
 * their residues, so the coordinates are read off there.
 */
inline Matrix<Fq> frobenius_action(const SolutionSet& S, int f) {
    const int d = static_cast<int>(S.basis.size());
    const FqField* P = gf(S.K->p, 1);
    const int m = S.K->n;
    Matrix<Fq> Bm(d * m, d, Fq(P));
    auto residue_coords = [&](const FqRow& x, int k) {
        std::vector<Fq> r;
        for (const auto& c : x) r.push_back(c.coeff(0).frobenius(k));
        return fp_coords(r);
    };
    for (int j = 0; j < d; ++j) {
        auto c = residue_coords(S.basis[j], 0);
        for (int r = 0; r < d * m; ++r) Bm(r, j) = c[r];
    }
    Matrix<Fq> A(d, d, Fq(P));
    for (int j = 0; j < d; ++j) {
        auto sol = solve(Bm, residue_coords(S.basis[j], f));
        if (!sol) throw Error("Frobenius image is not a solution");
        for (int i = 0; i < d; ++i) A(i, j) = (*sol)[i];
    }
    return A;
}

// Constant matrix over F_q as series known below u^M.
inline Matrix<FqSeries> constant_series_matrix(const Matrix<Fq>& A, int M) {
    return A.map([M](const Fq& c) { return FqSeries::constant(c, M); });
}

/**
 * The constant phi-module over F_q whose solutions carry arithmetic
 * Frobenius A in GL_d(F_p). Pick X in GL_d(F_{q^s}) with X^(q) = A^T X
 * (columnwise an F_q-linear condition; s = order of A); its rows are then
 * permuted by x -> x^(q) through A^T and G = X^{-1} X^(p) has entries in F_q.
 */
inline Matrix<Fq> unramified_to_phimod(const Matrix<Fq>& A, const FqField* Fq0, int s_cap = 0) {
    const int d = A.rows();
    const std::uint32_t p = Fq0->p;
    const int f = Fq0->n;
    const std::uint64_t s = matrix_order(A, static_cast<std::uint64_t>(s_cap ? s_cap : 64 / f));
    if (s == 0) throw ExtensionCapExceeded("representation needs a larger residue extension");
    const FqField* K = gf(p, f * static_cast<int>(s));
    const int m = K->n;
    const FqField* P = gf(p, 1);
    const FqEmbedding& emb = embedding(P, K);
    Matrix<Fq> AT = A.transpose().map([&](const Fq& c) { return emb(c); });

    Matrix<Fq> L(d * m, d * m, Fq(P));
    for (int a = 0; a < d; ++a)
        for (int t = 0; t < m; ++t) {
            std::vector<Fq> v(d, Fq(K));
            v[a].set_coeff(t, 1);
            std::vector<Fq> y(d, Fq(K));
            for (int i = 0; i < d; ++i) {
                y[i] = v[i].frobenius(f);
                for (int j = 0; j < d; ++j) y[i] = y[i] - AT(i, j) * v[j];
            }
            auto col = fp_coords(y);
            for (int r = 0; r < d * m; ++r) L(r, a * m + t) = col[r];
        }
    // greedily take kernel vectors that stay independent over K
    Matrix<Fq> X(d, d, Fq(K));
    int have = 0;
    for (auto& w : nullspace(L)) {
        if (have == d) break;
        Matrix<Fq> trial = X;
        for (int a = 0; a < d; ++a) {
            Fq x(K);
            for (int t = 0; t < m; ++t) x.set_coeff(t, w[a * m + t].coeff(0));
            trial(a, have) = x;
        }
        Matrix<Fq> cols(d, have + 1, Fq(K));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j <= have; ++j) cols(i, j) = trial(i, j);
        if (rank(cols) == have + 1) {
            X = trial;
            ++have;
        }
    }
    if (have < d) throw Error("no invertible solution matrix found");
    const Matrix<Fq> Gk = *inverse(X) * frobenius(X);
    const FqEmbedding& down = embedding(Fq0, K);
    return Gk.map([&](const Fq& c) {
        auto x = down.preimage(c);
        if (!x) throw Error("Frobenius matrix is not defined over F_q");
        return *x;
    });
}

// Minimal polynomial of A (monic, low degree first), by linear dependence of powers.
inline std::vector<Fq> minimal_polynomial(const Matrix<Fq>& A) {
    const int d = A.rows();
    std::vector<Matrix<Fq>> pw{Matrix<Fq>::identity(d, A(0, 0))};
    for (int k = 1; k <= d; ++k) {
        pw.push_back(pw.back() * A);
        Matrix<Fq> S(d * d, k, A(0, 0));
        std::vector<Fq> rhs(d * d, A(0, 0));
        for (int j = 0; j < k; ++j)
            for (int r = 0; r < d * d; ++r) S(r, j) = pw[j](r / d, r % d);
        for (int r = 0; r < d * d; ++r) rhs[r] = pw[k](r / d, r % d);
        if (auto c = solve(S, rhs)) {
            std::vector<Fq> poly;
            for (auto& x : *c) poly.push_back(-x);
            poly.push_back(Fq::one(A(0, 0).field()));
            return poly;
        }
    }
    throw Error("minimal polynomial search failed");
}

// Similarity over a field for d <= 3, where characteristic and minimal
// polynomials determine the class.
inline bool similar_small(const Matrix<Fq>& A, const Matrix<Fq>& B) {
    if (A.rows() > 3) throw Unsupported("similarity test implemented for d <= 3");
    return charpoly(A) == charpoly(B) && minimal_polynomial(A) == minimal_polynomial(B);
}

/**
 * Solutions of x^p = c u^a x in the model R: 0 and z u^{a/(p-1)} with
 * z^{p-1} = c, in enumeration order of z.
 */
inline std::vector<PerfSeries> solve_rank1(int a, const Fq& c, const PerfRing* R) {
    if (a < 0) throw DomainError("solve_rank1: negative exponent");
    if (c.is_zero()) throw DomainError("solve_rank1: zero coefficient");
    const Fq cK = embedding(c.field(), R->F)(c);
    return rank1_solutions(PerfSeries::monomial(R, cK, static_cast<std::int64_t>(a) * R->L));
}

}  // namespace phitau
