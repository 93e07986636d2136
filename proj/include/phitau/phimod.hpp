#pragma once

#include "series.hpp"

namespace phitau {

using WF = WittVector<Fq>;
using Laurent = TruncSeries<WF>;  // E^int / p^n truncated at u^M
using LMatrix = Matrix<Laurent>;

inline WF witt_int(const FqField* F, int n, const BigInt& k) {
    return RingTraits<WF>::from_big(WF::zero(F->p, n, Fq(F)), k);
}

inline Laurent laurent_zero(const FqField* F, int n, int M) { return Laurent(WF::zero(F->p, n, Fq(F)), M); }

// Random series c_0 + c_1 u + ... + c_{len-1} u^{len-1} + O(u^M) over W_n(F).
inline Laurent random_laurent(const FqField* F, int n, int len, int M, Rng& rng) {
    std::vector<WF> c;
    for (int k = 0; k < len; ++k) {
        std::vector<Fq> x;
        for (int i = 0; i < n; ++i) x.push_back(Fq::random(F, rng));
        c.emplace_back(F->p, x);
    }
    return Laurent::from_coeffs(WF::zero(F->p, n, Fq(F)), c, 0, M);
}

// Random element of GL_d(W_n(F)[[u]]) modulo u^M: invertible mod (p, u).
inline LMatrix random_unit_matrix(const FqField* F, int n, int d, int len, int M, Rng& rng) {
    for (;;) {
        LMatrix A(d, d, laurent_zero(F, n, M));
        Matrix<Fq> A0(d, d, Fq(F));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                A(i, j) = random_laurent(F, n, len, M, rng);
                A0(i, j) = A(i, j).coeff(0)[0];
            }
        if (!det(A0).is_zero()) return A;
    }
}

inline LMatrix frobenius(const LMatrix& A, std::uint64_t p) {
    return A.map([p](const Laurent& x) { return x.frobenius(p); });
}

inline int min_precision(const LMatrix& A) {
    int m = kInfinity;
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) m = std::min(m, A(i, j).precision());
    return m;
}

// Lowest exponent among the nonzero entries (kInfinity for the zero matrix).
inline int min_valuation(const LMatrix& A) {
    int m = kInfinity;
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j)
            if (!A(i, j).is_zero()) m = std::min(m, A(i, j).valuation());
    return m;
}

// det(A) is a unit of the Laurent ring: it has a coefficient that is a unit of W_n.
inline bool is_laurent_unit(const Laurent& x) {
    if (x.is_zero()) return false;
    try {
        x.unit_degree();
        return true;
    } catch (const DomainError&) {
        return false;
    }
}

// Inverse over the Laurent ring through the adjugate; nothing if det(A) is not a unit.
inline std::optional<LMatrix> laurent_inverse(const LMatrix& A) {
    const Laurent D = det(A);
    if (!is_laurent_unit(D)) return std::nullopt;
    const Laurent Di = D.inverse();
    LMatrix R = adjugate(A);
    for (int i = 0; i < R.rows(); ++i)
        for (int j = 0; j < R.cols(); ++j) R(i, j) = R(i, j) * Di;
    return R;
}

/**
 * Etale phi-module over E^int/p^n in a basis (e_1..e_d), with
 * (phi(e_1), .., phi(e_d)) = (e_1, .., e_d) G. Coordinates are columns, so
 * phi(X) = G phi(X) entrywise and a change of basis B gives B^{-1} G phi(B).
 */
class PhiModule {
public:
    PhiModule(const FqField* F, int n, LMatrix G, std::optional<EisensteinPoly> E = std::nullopt)
        : F_(F), n_(n), G_(std::move(G)), E_(std::move(E)) {
        if (G_.rows() != G_.cols() || G_.rows() < 1) throw DomainError("Frobenius matrix must be square");
        if (min_precision(G_) == kInfinity) throw DomainError("Frobenius matrix needs a finite u-adic precision");
    }

    std::uint64_t prime() const { return F_->p; }
    const FqField* field() const { return F_; }
    int rank() const { return G_.rows(); }
    int level() const { return n_; }
    int precision() const { return min_precision(G_); }
    const LMatrix& frobenius_matrix() const { return G_; }
    const std::optional<EisensteinPoly>& eisenstein() const { return E_; }

    bool is_etale() const { return is_laurent_unit(det(G_)); }

    // phi on coordinate columns
    LMatrix apply_phi(const LMatrix& X) const { return G_ * frobenius(X, prime()); }

    PhiModule base_change(const LMatrix& B) const {
        auto Bi = laurent_inverse(B);
        if (!Bi) throw DomainError("base change matrix is not invertible");
        return {F_, n_, *Bi * G_ * frobenius(B, prime()), E_};
    }

private:
    const FqField* F_;
    int n_;
    LMatrix G_;
    std::optional<EisensteinPoly> E_;
};

/**
 * A phi-stable W_n(F)[[u]]-lattice of a PhiModule, given by the coordinates
 * of its basis (columns of B). Its Frobenius matrix B^{-1} G phi(B) must
 * have no negative exponents.
 */
class PhiLattice {
public:
    PhiLattice(PhiModule M, LMatrix B) : M_(std::move(M)), B_(std::move(B)) {
        auto Bi = laurent_inverse(B_);
        if (!Bi) throw DomainError("lattice basis does not generate the module");
        GL_ = *Bi * M_.frobenius_matrix() * frobenius(B_, M_.prime());
        if (min_precision(GL_) <= 0) throw PrecisionError("lattice Frobenius matrix has no certified coefficients");
        if (min_valuation(GL_) < 0) throw DomainError("lattice is not stable under phi");
    }
    // The coordinate lattice.
    static PhiLattice standard(const PhiModule& M) {
        const int d = M.rank();
        LMatrix I = LMatrix::identity(d, laurent_zero(M.field(), M.level(), kInfinity));
        return {M, I};
    }

    const PhiModule& module() const { return M_; }
    const LMatrix& basis() const { return B_; }
    const LMatrix& matrix() const { return GL_; }
    int rank() const { return M_.rank(); }
    int precision() const { return min_precision(GL_); }

private:
    PhiModule M_;
    LMatrix B_;
    LMatrix GL_;
};

struct StabilizedLattice {
    PhiLattice lattice;
    int k;  // lattice = u^k (coordinate lattice)
};

/**
 * phi(u^k e) = u^{pk} G e, so u^k (coordinate lattice) has matrix
 * u^{(p-1)k} G; the least k >= 0 clearing the poles is
 * ceil(-v(G)/(p-1)).
 */
inline StabilizedLattice stabilize_lattice(const PhiModule& M) {
    const int v = min_valuation(M.frobenius_matrix());
    const int pm1 = static_cast<int>(M.prime() - 1);
    const int k = (v == kInfinity || v >= 0) ? 0 : (-v + pm1 - 1) / pm1;
    const WF one = WF::one(M.prime(), M.level(), Fq(M.field()));
    LMatrix B = LMatrix::identity(M.rank(), laurent_zero(M.field(), M.level(), kInfinity));
    for (int i = 0; i < M.rank(); ++i) B(i, i) = Laurent::monomial(one, k);
    return {PhiLattice(M, B), k};
}

struct UHeight {
    bool certified;
    int height;               // max pivot exponent; -1 when no pivot was found
    std::vector<int> pivots;  // Smith normal form exponents in elimination order
};

/**
 * Smith normal form of the lattice matrix over F[[u]]/u^M by elimination
 * with a pivot of least u-valuation. The u-height is the largest pivot
 * exponent; it is certified when every pivot lies below half the
 * precision of the matrix.
 */
inline UHeight u_height(const PhiLattice& L) {
    if (L.module().level() != 1) throw DomainError("u_height needs a mod p lattice");
    using S = TruncSeries<Fq>;
    const int d = L.rank();
    const int M = L.precision();
    Matrix<S> A(d, d, S(Fq(L.module().field()), M));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) A(i, j) = L.matrix()(i, j).map([](const WF& w) { return w[0]; });
    UHeight out{true, 0, {}};
    for (int r = 0; r < d; ++r) {
        int bi = -1, bj = -1, bv = kInfinity;
        for (int i = r; i < d; ++i)
            for (int j = r; j < d; ++j)
                if (!A(i, j).is_zero() && A(i, j).valuation() < bv) {
                    bv = A(i, j).valuation();
                    bi = i;
                    bj = j;
                }
        if (bi < 0) return {false, -1, out.pivots};
        for (int j = 0; j < d; ++j) std::swap(A(r, j), A(bi, j));
        for (int i = 0; i < d; ++i) std::swap(A(i, r), A(i, bj));
        const S unit_inv = A(r, r).shift(-bv).inverse();
        for (int i = r + 1; i < d; ++i) {
            const S f = A(i, r).shift(-bv) * unit_inv;
            for (int j = r; j < d; ++j) A(i, j) = A(i, j) - f * A(r, j);
        }
        for (int j = r + 1; j < d; ++j) {
            const S f = A(r, j).shift(-bv) * unit_inv;
            for (int i = r; i < d; ++i) A(i, j) = A(i, j) - f * A(i, r);
        }
        out.pivots.push_back(bv);
        out.height = std::max(out.height, bv);
        if (2 * bv >= M) out.certified = false;
    }
    return out;
}

/**
 * Whether U kills the cokernel of id (x) phi on the lattice, i.e. whether
 * U adj(G) is divisible by det(G) over W_n(F)[[u]]. det(G) = unit * P with
 * P distinguished, so this is Weierstrass division by P with zero
 * remainder. Indeterminate when the truncation cannot certify a remainder.
 */
inline Verdict height_divides(const PhiLattice& L, const Laurent& U) {
    if (U.is_zero() || U.valuation() < 0 || !is_laurent_unit(U)) throw DomainError("U must be a power series not divisible by p");
    const LMatrix& G = L.matrix();
    try {
        const Laurent D = det(G);
        if (!is_laurent_unit(D)) return Verdict::Indeterminate;
        const Laurent P = weierstrass(D).distinguished;
        const LMatrix adj = adjugate(G);
        for (int i = 0; i < adj.rows(); ++i)
            for (int j = 0; j < adj.cols(); ++j) {
                const Laurent g = (U * adj(i, j)).truncated(L.precision());
                if (!weierstrass_divide(g, P).remainder.is_zero()) return Verdict::False;
            }
        return Verdict::True;
    } catch (const PrecisionError&) {
        return Verdict::Indeterminate;
    }
}

// E(u) as a Laurent series over W_n(F), known below u^M.
inline Laurent eisenstein_series(const EisensteinPoly& E, const FqField* F, int n, int M) {
    return E.over_witt(F, n).truncated(M);
}

/**
 * Rank-one module with phi(e) = c^{-m} E(u)^m e, c = E(0)/p. Negative m is
 * allowed; E is inverted in the Laurent ring.
 */
inline PhiModule cyclotomic_module(const EisensteinPoly& E, int m, const FqField* F, int n, int M) {
    const std::uint64_t p = E.prime();
    if (F->p != p) throw DomainError("field characteristic differs from the Eisenstein prime");
    const PadicInt c = PadicInt::from_big(p, n, E.unit_c());
    const PadicInt cm = m >= 0 ? c.inverse().pow(static_cast<std::uint64_t>(m)) : c.pow(static_cast<std::uint64_t>(-m));
    const Laurent Eu = eisenstein_series(E, F, n, M);
    const Laurent base = m >= 0 ? Eu : Eu.inverse();
    Laurent g = Laurent::one(WF::zero(p, n, Fq(F)), M);
    for (int i = 0; i < std::abs(m); ++i) g = (g * base).truncated(M);
    g = g.scaled(witt_int(F, n, BigInt(cm.residue())));
    LMatrix G(1, 1, g);
    return {F, n, G, E};
}

/**
 * Whether f(L1) lies in L2 for a module map with matrix Fm (module
 * coordinates): B2^{-1} Fm B1 must have no negative exponents.
 */
inline Verdict lattice_contains(const PhiLattice& L1, const PhiLattice& L2, const LMatrix& Fm) {
    auto B2i = laurent_inverse(L2.basis().map([&](const Laurent& x) { return x.truncated(L2.module().precision()); }));
    if (!B2i) throw DomainError("second lattice basis is not invertible");
    const LMatrix X = *B2i * Fm * L1.basis();
    bool unknown = false;
    for (int i = 0; i < X.rows(); ++i)
        for (int j = 0; j < X.cols(); ++j) {
            const Laurent& x = X(i, j);
            if (!x.is_zero() && x.valuation() < 0) return Verdict::False;
            if (x.precision() <= 0) unknown = true;
        }
    return unknown ? Verdict::Indeterminate : Verdict::True;
}

// Kronecker product of lattices: the tensor product with basis e_i (x) f_j.
inline PhiLattice tensor(const PhiLattice& L1, const PhiLattice& L2) {
    auto kron = [](const LMatrix& A, const LMatrix& B) {
        LMatrix K(A.rows() * B.rows(), A.cols() * B.cols(), A(0, 0));
        for (int i = 0; i < A.rows(); ++i)
            for (int j = 0; j < A.cols(); ++j)
                for (int k = 0; k < B.rows(); ++k)
                    for (int l = 0; l < B.cols(); ++l) K(i * B.rows() + k, j * B.cols() + l) = A(i, j) * B(k, l);
        return K;
    };
    const PhiModule& M1 = L1.module();
    PhiModule M(M1.field(), M1.level(), kron(M1.frobenius_matrix(), L2.module().frobenius_matrix()), M1.eisenstein());
    return {M, kron(L1.basis(), L2.basis())};
}

/**
 * Brute-force u-height oracle for mod p lattices: the least h <= hmax with
 * G X = u^h I solvable modulo u^T, by linear algebra over F on the
 * coefficients of X. Independent of the elimination in u_height.
 */
inline std::optional<int> u_height_bruteforce(const PhiLattice& L, int hmax, int T) {
    const int d = L.rank();
    const FqField* F = L.module().field();
    // unknown coefficients x_{a,b,k}, k < T; equations (G X)_{i,b} coefficient t < T
    const int nun = d * d * T;
    for (int h = 0; h <= hmax; ++h) {
        Matrix<Fq> A(d * d * T, nun, Fq(F));
        std::vector<Fq> rhs(d * d * T, Fq(F));
        for (int i = 0; i < d; ++i)
            for (int b = 0; b < d; ++b)
                for (int t = 0; t < T; ++t) {
                    const int row = (i * d + b) * T + t;
                    for (int a = 0; a < d; ++a)
                        for (int k = 0; k <= t; ++k) {
                            const Fq g = L.matrix()(i, a).coeff(t - k)[0];
                            if (!g.is_zero()) A(row, (a * d + b) * T + k) = A(row, (a * d + b) * T + k) + g;
                        }
                    if (i == b && t == h) rhs[row] = Fq::one(F);
                }
        if (solve(A, rhs)) return h;
    }
    return std::nullopt;
}

}  // namespace phitau
