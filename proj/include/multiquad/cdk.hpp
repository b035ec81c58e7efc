#pragma once

#include <algorithm>
#include <vector>

#include "multiquad/hessenberg.hpp"
#include "multiquad/mop.hpp"

namespace multiquad {

// Scale factor between the all-B determinant and P_n: a signed product of the
// diagonal starting values over the trailing recurrence coefficients.
template <class S>
S gamma_factor(const RecurrenceTable<S>& tbl, const Mat<S>& initials, long n) {
    if (n < 1) throw Error("gamma_factor needs n >= 1");
    const int r = tbl.r;
    const long s = (n - 1) % r + 1;
    S acc(1);
    for (int j = 1; j <= r; ++j) acc = acc * initials.at(j - 1, j - 1);
    for (long l = r; l < n; ++l) acc = acc / tbl.coeff(l, r);
    if (((s / 2) + ((r - s) / 2)) % 2 != 0) acc = S(0) - acc;
    return acc;
}

// Value of the column vector B^{(c)}_n at x, given the values aval[m] of the
// type I vectors A_m at x. Uses the three-term style recurrence form when
// n >= c and the trailing expansion with unit padding otherwise.
template <class S, class T, class Embed>
std::vector<T> b_column(const RecurrenceTable<S>& tbl, const std::vector<std::vector<T>>& aval,
                        long n, int c, const T& x, Embed embed) {
    const int r = tbl.r;
    if (c < 1 || c > r) throw Error("B column index out of range");
    if (n < 1) throw Error("B column needs n >= 1");
    std::vector<T> out(static_cast<std::size_t>(r), make_zero(x));
    if (n >= c) {
        for (int comp = 0; comp < r; ++comp) {
            T acc = x * aval[static_cast<std::size_t>(n - c + 1)][static_cast<std::size_t>(comp)];
            acc = acc - aval[static_cast<std::size_t>(n - c)][static_cast<std::size_t>(comp)];
            for (int j = 0; j < c; ++j)
                acc = acc - embed(tbl.coeff(n + j - c, j)) *
                                aval[static_cast<std::size_t>(n - c + j + 1)][static_cast<std::size_t>(comp)];
            out[static_cast<std::size_t>(comp)] = std::move(acc);
        }
    } else {
        for (int comp = 0; comp < r; ++comp) {
            T acc = make_zero(x);
            for (int j = c; j <= r; ++j)
                acc = acc + embed(tbl.coeff(n - c + j, j)) *
                                aval[static_cast<std::size_t>(n - c + j + 1)][static_cast<std::size_t>(comp)];
            out[static_cast<std::size_t>(comp)] = std::move(acc);
        }
    }
    return out;
}

// Both B^{(i)}_n routes evaluated at x and compared: the recurrence form and
// the trailing expansion sum_{j=i}^r a_{n-i+j,j} A_{n-i+j+1}. Needs ladder
// data deep enough for the expansion (type I through n+r-i+1).
template <class S>
std::vector<S> b_vector(const LadderData<S>& lad, long n, int i, const S& x,
                        double tau_consist = 1e-8) {
    const int r = lad.table.r;
    if (i < 1 || i > r) throw Error("B column index out of range");
    std::vector<std::vector<S>> aval;
    const long amax = std::max<long>(n + r - i + 1, std::max<long>(n, r));
    if (static_cast<long>(lad.a.size()) <= amax)
        throw Error("ladder too short for the B expansion at level " + std::to_string(n));
    aval.reserve(static_cast<std::size_t>(amax + 1));
    for (long m = 0; m <= amax; ++m) {
        std::vector<S> row;
        for (int comp = 0; comp < r; ++comp)
            row.push_back(lad.a[static_cast<std::size_t>(m)][static_cast<std::size_t>(comp)](x));
        aval.push_back(std::move(row));
    }
    auto embed = [](const S& v) { return v; };
    std::vector<S> expansion(static_cast<std::size_t>(r), S(0));
    double scale = 1.0;
    for (int comp = 0; comp < r; ++comp) {
        S acc(0);
        for (int j = i; j <= r; ++j)
            acc = acc + lad.table.coeff(n - i + j, j) *
                            aval[static_cast<std::size_t>(n - i + j + 1)][static_cast<std::size_t>(comp)];
        scale = std::max(scale, approx_abs(acc));
        expansion[static_cast<std::size_t>(comp)] = std::move(acc);
    }
    if (n < i) return expansion; // only the expansion is defined here
    std::vector<S> rec = b_column(lad.table, aval, n, i, x, embed);
    for (int comp = 0; comp < r; ++comp) {
        S diff = rec[static_cast<std::size_t>(comp)] - expansion[static_cast<std::size_t>(comp)];
        bool bad;
        if constexpr (scalar_is_exact_v<S>)
            bad = !exactly_zero(diff);
        else
            bad = approx_abs(diff) > tau_consist * scale;
        if (bad)
            throw FormulaMismatch("B vector routes disagree at level " + std::to_string(n) +
                                  ", column " + std::to_string(i));
    }
    return rec;
}

namespace detail {

// values of A_0..A_{max(n,r)} at x, the common prerequisite of the kernel
// determinants
template <class S, class T, class Embed>
std::vector<std::vector<T>> kernel_type1_values(const RecurrenceTable<S>& tbl,
                                                const Mat<S>& initials, long n, const T& x,
                                                Embed embed) {
    return eval_type1(tbl, initials, std::max<long>(n, tbl.r), x, embed);
}

// permanent of the entrywise magnitudes: the term-size bound of the Leibniz
// determinant, against which its rounding noise is judged
template <class T>
double det_term_bound(const Mat<T>& m) {
    const long n = m.rows;
    std::vector<long> perm(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    double total = 0;
    do {
        double prod = 1;
        for (long i = 0; i < n; ++i)
            prod *= approx_abs(m.at(i, perm[static_cast<std::size_t>(i)]));
        total += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

} // namespace detail

// Q^{(i)}_{k,n}(x) for k = 1..n: determinants of the r x r matrices whose
// columns are B^{(1)}..B^{(r)} with the i-th replaced by A_k, all at x
template <class S, class T, class Embed>
std::vector<T> q_vector(const RecurrenceTable<S>& tbl, const Mat<S>& initials, long n, int i,
                        const T& x, Embed embed) {
    const int r = tbl.r;
    if (i < 1 || i > r) throw Error("Q column index out of range");
    if (n < 1) throw Error("q_vector needs n >= 1");
    auto aval = detail::kernel_type1_values(tbl, initials, n, x, embed);
    std::vector<std::vector<T>> bcols(static_cast<std::size_t>(r + 1));
    for (int c = 1; c <= r; ++c)
        if (c != i) bcols[static_cast<std::size_t>(c)] = b_column(tbl, aval, n, c, x, embed);
    std::vector<T> out;
    out.reserve(static_cast<std::size_t>(n));
    const T z = make_zero(x);
    for (long k = 1; k <= n; ++k) {
        Mat<T> m(r, r);
        for (int c = 1; c <= r; ++c) {
            const std::vector<T>& col =
                (c == i) ? aval[static_cast<std::size_t>(k)] : bcols[static_cast<std::size_t>(c)];
            for (int comp = 0; comp < r; ++comp) m.at(comp, c - 1) = col[static_cast<std::size_t>(comp)];
        }
        out.push_back(det_leibniz(m, z));
    }
    return out;
}

template <class S>
std::vector<S> q_vector(const RecurrenceTable<S>& tbl, const Mat<S>& initials, long n, int i,
                        const S& x) {
    return q_vector(tbl, initials, n, i, x, [](const S& v) { return v; });
}

// single entry Q^{(i)}_{k,n}(x)
template <class S>
S q_value(const RecurrenceTable<S>& tbl, const Mat<S>& initials, long n, int i, long k, const S& x) {
    auto q = q_vector(tbl, initials, n, i, x);
    if (k < 1 || k > n) throw Error("Q row index out of range");
    return q[static_cast<std::size_t>(k - 1)];
}

// term-size bounds of the kernel determinants for k = 1..n: the columns of
// close measure systems become nearly parallel deep in the table, so the
// signed determinants cancel far below these magnitudes
template <class S>
std::vector<double> q_term_bounds(const RecurrenceTable<S>& tbl, const Mat<S>& initials, long n,
                                  int i, const S& x) {
    const int r = tbl.r;
    if (i < 1 || i > r) throw Error("Q column index out of range");
    if (n < 1) throw Error("q_term_bounds needs n >= 1");
    auto embed = [](const S& v) { return v; };
    auto aval = detail::kernel_type1_values(tbl, initials, n, x, embed);
    std::vector<std::vector<S>> bcols(static_cast<std::size_t>(r + 1));
    for (int c = 1; c <= r; ++c)
        if (c != i) bcols[static_cast<std::size_t>(c)] = b_column(tbl, aval, n, c, x, embed);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (long k = 1; k <= n; ++k) {
        Mat<S> m(r, r);
        for (int c = 1; c <= r; ++c) {
            const std::vector<S>& col =
                (c == i) ? aval[static_cast<std::size_t>(k)] : bcols[static_cast<std::size_t>(c)];
            for (int comp = 0; comp < r; ++comp) m.at(comp, c - 1) = col[static_cast<std::size_t>(comp)];
        }
        out.push_back(detail::det_term_bound(m));
    }
    return out;
}

// determinant with all B columns in place; equals gamma_n * P_n
template <class S, class T, class Embed>
T big_b_value(const RecurrenceTable<S>& tbl, const Mat<S>& initials, long n, const T& x, Embed embed) {
    const int r = tbl.r;
    if (n < 1) throw Error("big_b_value needs n >= 1");
    auto aval = detail::kernel_type1_values(tbl, initials, n, x, embed);
    Mat<T> m(r, r);
    for (int c = 1; c <= r; ++c) {
        auto col = b_column(tbl, aval, n, c, x, embed);
        for (int comp = 0; comp < r; ++comp) m.at(comp, c - 1) = col[static_cast<std::size_t>(comp)];
    }
    return det_leibniz(m, make_zero(x));
}

template <class S>
S big_b_value(const RecurrenceTable<S>& tbl, const Mat<S>& initials, long n, const S& x) {
    return big_b_value(tbl, initials, n, x, [](const S& v) { return v; });
}

// term-size bound of the all-column determinant at x
template <class S>
double big_b_scale(const RecurrenceTable<S>& tbl, const Mat<S>& initials, long n, const S& x) {
    const int r = tbl.r;
    if (n < 1) throw Error("big_b_scale needs n >= 1");
    auto embed = [](const S& v) { return v; };
    auto aval = detail::kernel_type1_values(tbl, initials, n, x, embed);
    Mat<S> m(r, r);
    for (int c = 1; c <= r; ++c) {
        auto col = b_column(tbl, aval, n, c, x, embed);
        for (int comp = 0; comp < r; ++comp) m.at(comp, c - 1) = col[static_cast<std::size_t>(comp)];
    }
    return detail::det_term_bound(m);
}

// Kernel identity residual at (x, y):
//   (x - y) sum_k P_{k-1}(x) Q^{(i)}_{k,n}(y) - gamma_n (P_n(x)P_{n-i}(y) - P_n(y)P_{n-i}(x))
template <class S>
S cd_residual(const RecurrenceTable<S>& tbl, const Mat<S>& initials, long n, int i, const S& x,
              const S& y) {
    if (i < 1 || i > std::min<long>(tbl.r, n)) throw Error("kernel shift out of range");
    auto [px, dx] = eval_recurrence(tbl, n, x);
    auto [py, dy] = eval_recurrence(tbl, n, y);
    (void)dx;
    (void)dy;
    auto qy = q_vector(tbl, initials, n, i, y);
    S lhs(0);
    for (long k = 1; k <= n; ++k)
        lhs = lhs + px[static_cast<std::size_t>(k - 1)] * qy[static_cast<std::size_t>(k - 1)];
    lhs = (x - y) * lhs;
    const S g = gamma_factor(tbl, initials, n);
    S rhs = g * (px[static_cast<std::size_t>(n)] * py[static_cast<std::size_t>(n - i)] -
                 py[static_cast<std::size_t>(n)] * px[static_cast<std::size_t>(n - i)]);
    return lhs - rhs;
}

// Magnitude of the largest term entering the kernel identity at (x, y),
// counting the terms inside the kernel determinants. Both sides can cancel
// far below these sizes at individual points, so floating point residuals are
// judged against this yardstick.
template <class S>
double cd_scale(const RecurrenceTable<S>& tbl, const Mat<S>& initials, long n, int i, const S& x,
                const S& y) {
    if (i < 1 || i > std::min<long>(tbl.r, n)) throw Error("kernel shift out of range");
    auto px = eval_recurrence(tbl, n, x).first;
    auto py = eval_recurrence(tbl, n, y).first;
    auto qb = q_term_bounds(tbl, initials, n, i, y);
    double lhs = 0;
    for (long k = 1; k <= n; ++k)
        lhs += approx_abs(px[static_cast<std::size_t>(k - 1)]) * qb[static_cast<std::size_t>(k - 1)];
    lhs *= approx_abs(x - y);
    const S g = gamma_factor(tbl, initials, n);
    const double rhs = approx_abs(g) * (approx_abs(px[static_cast<std::size_t>(n)] *
                                                   py[static_cast<std::size_t>(n - i)]) +
                                        approx_abs(py[static_cast<std::size_t>(n)] *
                                                   px[static_cast<std::size_t>(n - i)]));
    return std::max(lhs, rhs);
}

// confluent form at x:
//   sum_k P_{k-1}(x) Q^{(i)}_{k,n}(x) - gamma_n (P'_n(x)P_{n-i}(x) - P_n(x)P'_{n-i}(x))
template <class S>
S cd_residual_confluent(const RecurrenceTable<S>& tbl, const Mat<S>& initials, long n, int i,
                        const S& x) {
    if (i < 1 || i > std::min<long>(tbl.r, n)) throw Error("kernel shift out of range");
    auto [px, dx] = eval_recurrence(tbl, n, x);
    auto qx = q_vector(tbl, initials, n, i, x);
    S lhs(0);
    for (long k = 1; k <= n; ++k)
        lhs = lhs + px[static_cast<std::size_t>(k - 1)] * qx[static_cast<std::size_t>(k - 1)];
    const S g = gamma_factor(tbl, initials, n);
    S rhs = g * (dx[static_cast<std::size_t>(n)] * px[static_cast<std::size_t>(n - i)] -
                 px[static_cast<std::size_t>(n)] * dx[static_cast<std::size_t>(n - i)]);
    return lhs - rhs;
}

// term-size yardstick of the confluent form at x
template <class S>
double cd_scale_confluent(const RecurrenceTable<S>& tbl, const Mat<S>& initials, long n, int i,
                          const S& x) {
    if (i < 1 || i > std::min<long>(tbl.r, n)) throw Error("kernel shift out of range");
    auto [px, dx] = eval_recurrence(tbl, n, x);
    auto qb = q_term_bounds(tbl, initials, n, i, x);
    double lhs = 0;
    for (long k = 1; k <= n; ++k)
        lhs += approx_abs(px[static_cast<std::size_t>(k - 1)]) * qb[static_cast<std::size_t>(k - 1)];
    const S g = gamma_factor(tbl, initials, n);
    const double rhs = approx_abs(g) * (approx_abs(dx[static_cast<std::size_t>(n)] *
                                                   px[static_cast<std::size_t>(n - i)]) +
                                        approx_abs(px[static_cast<std::size_t>(n)] *
                                                   dx[static_cast<std::size_t>(n - i)]));
    return std::max(lhs, rhs);
}

// Residual polynomials of the row identity
//   x (A_1 .. A_n) = (A_1 .. A_n) L_n + (0 .. 0 B^{(r*)} .. B^{(1)}),
// r* = min(r, n); entry k of the result is an r-component vector polynomial,
// identically zero when the identity holds.
template <class S>
std::vector<VectorPoly<S>> row_relation_residual(const RecurrenceTable<S>& tbl,
                                                 const Mat<S>& initials, long n) {
    const int r = tbl.r;
    if (n < 1) throw Error("row relation needs n >= 1");
    const long rstar = std::min<long>(r, n);
    auto a = type1_sequence(tbl, initials, std::max<long>(n, r));
    Mat<S> L = hessenberg_matrix(tbl, n);
    const Poly<S> xp = Poly<S>::identity();
    auto embed = [](const S& v) { return Poly<S>::constant(v); };
    // reuse the pointwise column builder with polynomial-valued points
    std::vector<std::vector<Poly<S>>> aval;
    aval.reserve(a.size());
    for (const auto& av : a) aval.push_back(av);
    std::vector<VectorPoly<S>> res(static_cast<std::size_t>(n), VectorPoly<S>(static_cast<std::size_t>(r)));
    for (long k = 1; k <= n; ++k) {
        VectorPoly<S> acc(static_cast<std::size_t>(r));
        for (long m = 1; m <= n; ++m) {
            const S& lij = L.at(m - 1, k - 1);
            if (exactly_zero(lij)) continue;
            for (int comp = 0; comp < r; ++comp)
                acc[static_cast<std::size_t>(comp)] =
                    acc[static_cast<std::size_t>(comp)] +
                    lij * a[static_cast<std::size_t>(m)][static_cast<std::size_t>(comp)];
        }
        if (k >= n - rstar + 1) {
            const int c = static_cast<int>(n + 1 - k);
            auto bk = b_column(tbl, aval, n, c, xp, embed);
            for (int comp = 0; comp < r; ++comp)
                acc[static_cast<std::size_t>(comp)] =
                    acc[static_cast<std::size_t>(comp)] + bk[static_cast<std::size_t>(comp)];
        }
        for (int comp = 0; comp < r; ++comp)
            res[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(comp)] =
                acc[static_cast<std::size_t>(comp)] -
                a[static_cast<std::size_t>(k)][static_cast<std::size_t>(comp)].shifted_up();
    }
    return res;
}

// Residual polynomials of the left relation for the kernel rows:
//   x Q^{(i)}(x)^T = Q^{(i)}(x)^T L_n + B_n(x) e_{n-i+1}^T
template <class S>
std::vector<Poly<S>> q_relation_residual(const RecurrenceTable<S>& tbl, const Mat<S>& initials,
                                         long n, int i) {
    const int r = tbl.r;
    if (i < 1 || i > std::min<long>(r, n)) throw Error("kernel shift out of range");
    Mat<S> L = hessenberg_matrix(tbl, n);
    const Poly<S> xp = Poly<S>::identity();
    auto embed = [](const S& v) { return Poly<S>::constant(v); };
    auto q = q_vector(tbl, initials, n, i, xp, embed);
    auto bn = big_b_value(tbl, initials, n, xp, embed);
    std::vector<Poly<S>> res(static_cast<std::size_t>(n));
    for (long k = 1; k <= n; ++k) {
        Poly<S> acc;
        for (long m = 1; m <= n; ++m) {
            const S& lij = L.at(m - 1, k - 1);
            if (exactly_zero(lij)) continue;
            acc = acc + lij * q[static_cast<std::size_t>(m - 1)];
        }
        if (k == n - i + 1) acc = acc + bn;
        res[static_cast<std::size_t>(k - 1)] = acc - q[static_cast<std::size_t>(k - 1)].shifted_up();
    }
    return res;
}

} // namespace multiquad
