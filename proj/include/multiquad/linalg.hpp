#pragma once

#include <algorithm>
#include <vector>

#include "multiquad/scalar.hpp"

namespace multiquad {

template <class S>
struct Mat {
    long rows = 0, cols = 0;
    std::vector<S> a;

    Mat() = default;
    Mat(long r, long c) : rows(r), cols(c), a(static_cast<std::size_t>(r * c)) {} // value-init: zeros

    S& at(long i, long j) { return a[static_cast<std::size_t>(i * cols + j)]; }
    const S& at(long i, long j) const { return a[static_cast<std::size_t>(i * cols + j)]; }

    static Mat eye(long n) {
        Mat m(n, n);
        for (long i = 0; i < n; ++i) m.at(i, i) = S(1);
        return m;
    }

    Mat transposed() const {
        Mat t(cols, rows);
        for (long i = 0; i < rows; ++i)
            for (long j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    double max_abs() const {
        double m = 0;
        for (const auto& v : a) m = std::max(m, approx_abs(v));
        return m;
    }

    template <class To, class F>
    Mat<To> cast(F f) const {
        Mat<To> out(rows, cols);
        for (std::size_t i = 0; i < a.size(); ++i) out.a[i] = f(a[i]);
        return out;
    }
};

namespace detail {

// row echelon by partial pivoting (largest magnitude); for exact scalars a
// pivot counts iff it is nonzero, for float iff it exceeds tol_abs
template <class S>
long echelon(Mat<S>& m, double tol_abs, S* det_out) {
    long rank = 0;
    bool neg = false;
    S det(1);
    for (long col = 0; col < m.cols && rank < m.rows; ++col) {
        long best = -1;
        double best_mag = 0;
        for (long i = rank; i < m.rows; ++i) {
            double mag = approx_abs(m.at(i, col));
            if (mag > best_mag) {
                best_mag = mag;
                best = i;
            }
        }
        bool usable;
        if constexpr (scalar_is_exact_v<S>)
            usable = best >= 0 && !exactly_zero(m.at(best, col));
        else
            usable = best >= 0 && best_mag > tol_abs;
        if (!usable) {
            det = S(0);
            continue;
        }
        if (best != rank) {
            for (long j = 0; j < m.cols; ++j) std::swap(m.at(best, j), m.at(rank, j));
            neg = !neg;
        }
        const S pivot = m.at(rank, col);
        det = det * pivot;
        for (long i = rank + 1; i < m.rows; ++i) {
            if (exactly_zero(m.at(i, col))) continue;
            S f = m.at(i, col) / pivot;
            m.at(i, col) = S(0);
            for (long j = col + 1; j < m.cols; ++j) m.at(i, j) = m.at(i, j) - f * m.at(rank, j);
        }
        ++rank;
    }
    if (det_out) *det_out = neg ? S(0) - det : det;
    return rank;
}

} // namespace detail

// rank with the float threshold interpreted relative to the largest entry
template <class S>
long rank_of(Mat<S> m, double rel_tol = 1e-10) {
    double tol_abs = rel_tol * m.max_abs();
    return detail::echelon(m, tol_abs, static_cast<S*>(nullptr));
}

template <class S>
S det_elimination(Mat<S> m) {
    if (m.rows != m.cols) throw Error("det: matrix not square");
    if (m.rows == 0) return S(1);
    S det(0);
    detail::echelon(m, 0.0, &det);
    return det;
}

// Laplace-free signed expansion; division-free so it works over rings
// (used for the small r x r kernel determinants)
template <class S>
S det_leibniz(const Mat<S>& m, const S& zero_like) {
    if (m.rows != m.cols) throw Error("det: matrix not square");
    const long n = m.rows;
    if (n == 0) return make_one(zero_like);
    std::vector<long> perm(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    S acc = make_zero(zero_like);
    bool neg = false;
    // iterate permutations in lexicographic order, tracking parity
    while (true) {
        S term = make_one(zero_like);
        for (long i = 0; i < n; ++i) term = term * m.at(i, perm[static_cast<std::size_t>(i)]);
        acc = neg ? acc - term : acc + term;
        // next_permutation with parity bookkeeping: count the swaps it makes
        long i = n - 2;
        while (i >= 0 && perm[static_cast<std::size_t>(i)] >= perm[static_cast<std::size_t>(i + 1)]) --i;
        if (i < 0) break;
        long j = n - 1;
        while (perm[static_cast<std::size_t>(j)] <= perm[static_cast<std::size_t>(i)]) --j;
        std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
        neg = !neg;
        long lo = i + 1, hi = n - 1;
        while (lo < hi) {
            std::swap(perm[static_cast<std::size_t>(lo)], perm[static_cast<std::size_t>(hi)]);
            neg = !neg;
            ++lo;
            --hi;
        }
    }
    return acc;
}

// solve A x = b; throws SingularSystem when elimination breaks down
template <class S>
std::vector<S> solve_linear(Mat<S> A, std::vector<S> b, double rel_tol = 1e-12) {
    if (A.rows != A.cols || static_cast<long>(b.size()) != A.rows)
        throw Error("solve: shape mismatch");
    const long n = A.rows;
    const double tol_abs = rel_tol * A.max_abs();
    for (long col = 0; col < n; ++col) {
        long best = col;
        double best_mag = approx_abs(A.at(col, col));
        for (long i = col + 1; i < n; ++i) {
            double mag = approx_abs(A.at(i, col));
            if (mag > best_mag) {
                best_mag = mag;
                best = i;
            }
        }
        bool usable;
        if constexpr (scalar_is_exact_v<S>)
            usable = !exactly_zero(A.at(best, col));
        else
            usable = best_mag > tol_abs;
        if (!usable) throw SingularSystem("linear system is singular at column " + std::to_string(col));
        if (best != col) {
            for (long j = 0; j < n; ++j) std::swap(A.at(best, j), A.at(col, j));
            std::swap(b[static_cast<std::size_t>(best)], b[static_cast<std::size_t>(col)]);
        }
        const S pivot = A.at(col, col);
        for (long i = col + 1; i < n; ++i) {
            if (exactly_zero(A.at(i, col))) continue;
            S f = A.at(i, col) / pivot;
            A.at(i, col) = S(0);
            for (long j = col + 1; j < n; ++j) A.at(i, j) = A.at(i, j) - f * A.at(col, j);
            b[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)] - f * b[static_cast<std::size_t>(col)];
        }
    }
    std::vector<S> x(static_cast<std::size_t>(n), S(0));
    for (long i = n - 1; i >= 0; --i) {
        S acc = b[static_cast<std::size_t>(i)];
        for (long j = i + 1; j < n; ++j) acc = acc - A.at(i, j) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(i)] = acc / A.at(i, i);
    }
    return x;
}

} // namespace multiquad
