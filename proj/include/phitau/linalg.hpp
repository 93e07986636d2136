#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ring.hpp"

namespace phitau {

// Dense row-major matrix over any of our rings.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, const T& fill) : r_(rows), c_(cols), a_(static_cast<std::size_t>(rows) * cols, fill) {}

    static Matrix identity(int n, const T& like) {
        Matrix m(n, n, RingTraits<T>::zero(like));
        for (int i = 0; i < n; ++i) m(i, i) = RingTraits<T>::one(like);
        return m;
    }

    int rows() const { return r_; }
    int cols() const { return c_; }
    T& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * c_ + j]; }
    const T& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * c_ + j]; }

    friend Matrix operator*(const Matrix& A, const Matrix& B) {
        if (A.c_ != B.r_) throw DomainError("matrix shape mismatch");
        Matrix C(A.r_, B.c_, RingTraits<T>::zero(A.a_.front()));
        for (int i = 0; i < A.r_; ++i)
            for (int k = 0; k < A.c_; ++k) {
                if (RingTraits<T>::is_zero(A(i, k))) continue;
                for (int j = 0; j < B.c_; ++j) C(i, j) = C(i, j) + A(i, k) * B(k, j);
            }
        return C;
    }
    friend Matrix operator+(const Matrix& A, const Matrix& B) {
        Matrix C = A;
        for (std::size_t i = 0; i < C.a_.size(); ++i) C.a_[i] = A.a_[i] + B.a_[i];
        return C;
    }
    friend Matrix operator-(const Matrix& A, const Matrix& B) {
        Matrix C = A;
        for (std::size_t i = 0; i < C.a_.size(); ++i) C.a_[i] = A.a_[i] - B.a_[i];
        return C;
    }
    friend bool operator==(const Matrix& A, const Matrix& B) {
        if (A.r_ != B.r_ || A.c_ != B.c_) return false;
        for (std::size_t i = 0; i < A.a_.size(); ++i)
            if (!(A.a_[i] == B.a_[i])) return false;
        return true;
    }

    template <class F>
    auto map(F f) const -> Matrix<decltype(f(std::declval<T>()))> {
        using U = decltype(f(std::declval<T>()));
        Matrix<U> M(r_, c_, f(a_.front()));
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) M(i, j) = f((*this)(i, j));
        return M;
    }

    Matrix transpose() const {
        Matrix M(c_, r_, a_.front());
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) M(j, i) = (*this)(i, j);
        return M;
    }

    Matrix pow(std::uint64_t e) const {
        Matrix R = identity(r_, a_.front()), B = *this;
        while (e) {
            if (e & 1) R = R * B;
            B = B * B;
            e >>= 1;
        }
        return R;
    }

    const std::vector<T>& data() const { return a_; }

private:
    int r_ = 0, c_ = 0;
    std::vector<T> a_;
};

// Determinant by cofactor expansion; needs no division, so it works over
// any commutative ring. Meant for d <= 4.
template <class T>
T det(const Matrix<T>& A) {
    const int n = A.rows();
    if (n == 1) return A(0, 0);
    if (n == 2) return A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
    T acc = RingTraits<T>::zero(A(0, 0));
    for (int j = 0; j < n; ++j) {
        Matrix<T> m(n - 1, n - 1, A(0, 0));
        for (int r = 1; r < n; ++r)
            for (int c = 0, cc = 0; c < n; ++c)
                if (c != j) m(r - 1, cc++) = A(r, c);
        T term = A(0, j) * det(m);
        acc = (j % 2) ? acc - term : acc + term;
    }
    return acc;
}

// adj(A) with A * adj(A) = det(A) * I.
template <class T>
Matrix<T> adjugate(const Matrix<T>& A) {
    const int n = A.rows();
    Matrix<T> adj(n, n, A(0, 0));
    if (n == 1) {
        adj(0, 0) = RingTraits<T>::one(A(0, 0));
        return adj;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Matrix<T> m(n - 1, n - 1, A(0, 0));
            for (int r = 0, rr = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 0, cc = 0; c < n; ++c)
                    if (c != j) m(rr, cc++) = A(r, c);
                ++rr;
            }
            T cof = det(m);
            adj(j, i) = ((i + j) % 2) ? RingTraits<T>::zero(cof) - cof : cof;
        }
    return adj;
}

// Gaussian elimination over a field.
template <class T>
struct Rref {
    Matrix<T> R;
    std::vector<int> pivots;  // pivot column of each nonzero row
};

template <class T>
Rref<T> rref(Matrix<T> A) {
    using Tr = RingTraits<T>;
    std::vector<int> piv;
    int row = 0;
    for (int col = 0; col < A.cols() && row < A.rows(); ++col) {
        int sel = -1;
        for (int i = row; i < A.rows(); ++i)
            if (!Tr::is_zero(A(i, col))) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        if (sel != row)
            for (int j = 0; j < A.cols(); ++j) std::swap(A(sel, j), A(row, j));
        T inv = Tr::inverse(A(row, col));
        for (int j = col; j < A.cols(); ++j) A(row, j) = A(row, j) * inv;
        for (int i = 0; i < A.rows(); ++i) {
            if (i == row || Tr::is_zero(A(i, col))) continue;
            T f = A(i, col);
            for (int j = col; j < A.cols(); ++j) A(i, j) = A(i, j) - f * A(row, j);
        }
        piv.push_back(col);
        ++row;
    }
    return {std::move(A), std::move(piv)};
}

template <class T>
int rank(const Matrix<T>& A) {
    return static_cast<int>(rref(A).pivots.size());
}

// Basis of {x : A x = 0}; free variables run in increasing column order.
template <class T>
std::vector<std::vector<T>> nullspace(const Matrix<T>& A) {
    using Tr = RingTraits<T>;
    auto [R, piv] = rref(A);
    std::vector<bool> is_piv(A.cols(), false);
    for (int c : piv) is_piv[c] = true;
    std::vector<std::vector<T>> basis;
    const T zero = Tr::zero(A(0, 0));
    for (int f = 0; f < A.cols(); ++f) {
        if (is_piv[f]) continue;
        std::vector<T> x(A.cols(), zero);
        x[f] = Tr::one(zero);
        for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = zero - R(static_cast<int>(r), f);
        basis.push_back(std::move(x));
    }
    return basis;
}

// Some x with A x = b, or nothing.
template <class T>
std::optional<std::vector<T>> solve(const Matrix<T>& A, const std::vector<T>& b) {
    using Tr = RingTraits<T>;
    Matrix<T> Ab(A.rows(), A.cols() + 1, A(0, 0));
    for (int i = 0; i < A.rows(); ++i) {
        for (int j = 0; j < A.cols(); ++j) Ab(i, j) = A(i, j);
        Ab(i, A.cols()) = b[i];
    }
    auto [R, piv] = rref(std::move(Ab));
    if (!piv.empty() && piv.back() == A.cols()) return std::nullopt;
    std::vector<T> x(A.cols(), Tr::zero(A(0, 0)));
    for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = R(static_cast<int>(r), A.cols());
    return x;
}

template <class T>
std::optional<Matrix<T>> inverse(const Matrix<T>& A) {
    const int n = A.rows();
    Matrix<T> Ai(n, 2 * n, RingTraits<T>::zero(A(0, 0)));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) Ai(i, j) = A(i, j);
        Ai(i, n + i) = RingTraits<T>::one(A(0, 0));
    }
    auto [R, piv] = rref(std::move(Ai));
    if (static_cast<int>(piv.size()) < n || piv[n - 1] != n - 1) return std::nullopt;
    Matrix<T> out(n, n, A(0, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = R(i, n + j);
    return out;
}

// Coefficients of det(xI - A), low degree first, by cofactor expansion over
// the polynomial ring (d <= 4).
template <class T>
std::vector<T> charpoly(const Matrix<T>& A) {
    using Tr = RingTraits<T>;
    const int n = A.rows();
    const T zero = Tr::zero(A(0, 0));
    using P = std::vector<T>;
    auto padd = [&](const P& a, const P& b, bool sub) {
        P r(std::max(a.size(), b.size()), zero);
        for (std::size_t i = 0; i < r.size(); ++i) {
            T x = i < a.size() ? a[i] : zero, y = i < b.size() ? b[i] : zero;
            r[i] = sub ? x - y : x + y;
        }
        return r;
    };
    auto pmul = [&](const P& a, const P& b) {
        P r(a.size() + b.size() - 1, zero);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
        return r;
    };
    std::function<P(const std::vector<std::vector<P>>&)> pdet = [&](const std::vector<std::vector<P>>& M) -> P {
        const std::size_t m = M.size();
        if (m == 1) return M[0][0];
        P acc{zero};
        for (std::size_t j = 0; j < m; ++j) {
            std::vector<std::vector<P>> sub;
            for (std::size_t r = 1; r < m; ++r) {
                std::vector<P> row;
                for (std::size_t c = 0; c < m; ++c)
                    if (c != j) row.push_back(M[r][c]);
                sub.push_back(row);
            }
            acc = padd(acc, pmul(M[0][j], pdet(sub)), j % 2);
        }
        return acc;
    };
    std::vector<std::vector<P>> M(n, std::vector<P>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M[i][j] = i == j ? P{zero - A(i, j), Tr::one(zero)} : P{zero - A(i, j)};
    P cp = pdet(M);
    cp.resize(n + 1, zero);
    return cp;
}

}  // namespace phitau
