#pragma once

#include <string>
#include <utility>
#include <vector>

#include "multiquad/measures.hpp"
#include "multiquad/polynomial.hpp"

namespace multiquad {

// construction tolerances (exact scalars ignore them)
struct BuildTolerances {
    double tau_rank = 1e-10;    // normality rank threshold, relative to largest entry
    double tau_solve = 1e-12;   // elimination pivot threshold
    double tau_zero = 1e-12;    // zero test for recurrence pivots, relative to row scale
    double tau_consist = 1e-8;  // dual-route consistency, relative
};

// integral of p(x) * sum_j av[j](x) dmu_j(x) as a finite moment sum
template <class S>
S pair_integral(const MeasureSystem& sys, const Poly<S>& p, const VectorPoly<S>& av) {
    S acc(0);
    for (int j = 1; j <= sys.r; ++j) {
        const Poly<S>& aj = av[static_cast<std::size_t>(j - 1)];
        for (long s = 0; s <= p.degree(); ++s)
            for (long t = 0; t <= aj.degree(); ++t)
                acc = acc + p.coeff(s) * aj.coeff(t) * sys.moment<S>(j, s + t);
    }
    return acc;
}

// Monic polynomial of degree n orthogonal to x^l (l < nu_n(j)) against every
// measure. Unique when the proper index is normal.
template <class S>
Poly<S> type2_polynomial(const MeasureSystem& sys, long n, const BuildTolerances& tol = {}) {
    if (n == 0) return Poly<S>::constant(S(1));
    auto rep = normality_check<S>(sys, n, tol.tau_rank);
    if (!rep.normal)
        throw NotNormal("index " + std::to_string(n) + " is not normal (moment rank " +
                        std::to_string(rep.rank) + ")");
    const MultiIndex nu = MultiIndex::proper(n, sys.r);
    Mat<S> A(n, n);
    std::vector<S> rhs(static_cast<std::size_t>(n), S(0));
    long row = 0;
    for (int j = 1; j <= sys.r; ++j)
        for (long l = 0; l < nu(j); ++l, ++row) {
            for (long k = 0; k < n; ++k) A.at(row, k) = sys.moment<S>(j, l + k);
            rhs[static_cast<std::size_t>(row)] = S(0) - sys.moment<S>(j, l + n);
        }
    std::vector<S> c = solve_linear(std::move(A), std::move(rhs), tol.tau_solve);
    c.push_back(S(1));
    return Poly<S>(std::move(c));
}

// Vector polynomial (A_{n,1},...,A_{n,r}), deg A_{n,j} <= nu_n(j)-1, whose
// weighted sum annihilates x^l for l <= n-2 and pairs to 1 against x^{n-1}.
template <class S>
VectorPoly<S> type1_polynomial(const MeasureSystem& sys, long n, const BuildTolerances& tol = {}) {
    VectorPoly<S> out(static_cast<std::size_t>(sys.r));
    if (n == 0) return out;
    auto rep = normality_check<S>(sys, n, tol.tau_rank);
    if (!rep.normal)
        throw NotNormal("index " + std::to_string(n) + " is not normal (moment rank " +
                        std::to_string(rep.rank) + ")");
    const MultiIndex nu = MultiIndex::proper(n, sys.r);
    std::vector<std::pair<int, long>> cols;
    for (int j = 1; j <= sys.r; ++j)
        for (long k = 0; k < nu(j); ++k) cols.emplace_back(j, k);
    Mat<S> A(n, n);
    std::vector<S> rhs(static_cast<std::size_t>(n), S(0));
    for (long l = 0; l < n; ++l)
        for (long ci = 0; ci < n; ++ci)
            A.at(l, ci) = sys.moment<S>(cols[static_cast<std::size_t>(ci)].first,
                                        l + cols[static_cast<std::size_t>(ci)].second);
    rhs[static_cast<std::size_t>(n - 1)] = S(1);
    std::vector<S> x = solve_linear(std::move(A), std::move(rhs), tol.tau_solve);
    for (int j = 1; j <= sys.r; ++j) out[static_cast<std::size_t>(j - 1)] = Poly<S>();
    for (long ci = 0; ci < n; ++ci) {
        auto [j, k] = cols[static_cast<std::size_t>(ci)];
        auto& comp = out[static_cast<std::size_t>(j - 1)];
        if (comp.c.size() <= static_cast<std::size_t>(k)) comp.c.resize(static_cast<std::size_t>(k + 1), S(0));
        comp.c[static_cast<std::size_t>(k)] = x[static_cast<std::size_t>(ci)];
    }
    for (auto& comp : out) comp.trim();
    return out;
}

// The r x r matrix of starting values A_{i,j} (zero above the diagonal),
// computed from moment determinants: A_{i,j} = (-1)^{i+j} det of D_i with row
// j and column i removed, over det D_i. Cross-checked against the directly
// solved vector polynomials.
template <class S>
Mat<S> type1_initials(const MeasureSystem& sys, const BuildTolerances& tol = {}) {
    const int r = sys.r;
    Mat<S> out(r, r);
    double scale = 0;
    for (int i = 1; i <= r; ++i) {
        auto di = moment_matrix<S>(sys, i).m;
        S den = det_elimination(di);
        if (exactly_zero(den))
            throw NotNormal("index " + std::to_string(i) + " is not normal (zero moment determinant)");
        for (int j = 1; j <= i; ++j) {
            Mat<S> minor(i - 1, i - 1);
            for (long rr = 0, mr = 0; rr < i; ++rr) {
                if (rr == j - 1) continue;
                for (long cc = 0, mc = 0; cc < i; ++cc) {
                    if (cc == i - 1) continue;
                    minor.at(mr, mc) = di.at(rr, cc);
                    ++mc;
                }
                ++mr;
            }
            S v = det_elimination(minor) / den;
            if ((i + j) % 2 != 0) v = S(0) - v;
            out.at(i - 1, j - 1) = v;
            scale = std::max(scale, approx_abs(v));
        }
    }
    for (int i = 1; i <= r; ++i) {
        VectorPoly<S> ai = type1_polynomial<S>(sys, i, tol);
        for (int j = 1; j <= r; ++j) {
            S direct = ai[static_cast<std::size_t>(j - 1)].coeff_or_zero(0);
            S diff = out.at(i - 1, j - 1) - direct;
            bool bad;
            if constexpr (scalar_is_exact_v<S>)
                bad = !exactly_zero(diff);
            else
                bad = approx_abs(diff) > tol.tau_consist * std::max(1.0, scale);
            if (bad)
                throw FormulaMismatch("type I starting value (" + std::to_string(i) + "," +
                                      std::to_string(j) + ") differs between routes");
        }
    }
    return out;
}

// Coefficients a_{n,j} of x P_n = P_{n+1} + sum_j a_{n,j} P_{n-j}. Rows are
// indexed by n; row n holds a_{n,0}..a_{n,min(r,n)}. coeff() additionally
// serves the convention a_{l1,l2} = 1 for 0 <= l1 < l2 <= r used by the
// B-vector expansion.
template <class S>
struct RecurrenceTable {
    int r = 0;
    std::vector<std::vector<S>> rows;

    long n_rows() const { return static_cast<long>(rows.size()); }

    S coeff(long n, int j) const {
        if (j < 0 || j > r) throw Error("recurrence coefficient column out of range");
        if (n < 0) throw Error("recurrence coefficient row out of range");
        if (n < j) return S(1); // padding convention
        if (n >= n_rows())
            throw Error("recurrence table has " + std::to_string(n_rows()) + " rows, row " +
                        std::to_string(n) + " requested");
        return rows[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)];
    }

    template <class To, class F>
    RecurrenceTable<To> cast(F f) const {
        RecurrenceTable<To> out;
        out.r = r;
        out.rows.reserve(rows.size());
        for (const auto& row : rows) {
            std::vector<To> nr;
            nr.reserve(row.size());
            for (const auto& v : row) nr.push_back(f(v));
            out.rows.push_back(std::move(nr));
        }
        return out;
    }
};

// Everything a single ladder pass produces: the recurrence rows, the starting
// values, and the polynomial sequences themselves.
template <class S>
struct LadderData {
    RecurrenceTable<S> table;     // rows 0..row_max
    Mat<S> initials;              // r x r
    std::vector<Poly<S>> p;       // P_0..P_{row_max+1}
    std::vector<VectorPoly<S>> a; // A_0..A_{row_max+1}
};

// Builds rows 0..row_max by the pairing integrals a_{n,j} = <x P_n, A_{n+1-j}>
// and verifies each row by re-deriving P_{n+1} from the recurrence against the
// directly solved polynomial.
template <class S>
LadderData<S> build_ladder(const MeasureSystem& sys, long row_max, const BuildTolerances& tol = {}) {
    if (row_max < 0) throw Error("ladder needs row_max >= 0");
    const int r = sys.r;
    LadderData<S> out;
    out.table.r = r;
    out.p.reserve(static_cast<std::size_t>(row_max + 2));
    out.a.reserve(static_cast<std::size_t>(row_max + 2));
    for (long k = 0; k <= row_max + 1; ++k) {
        out.p.push_back(type2_polynomial<S>(sys, k, tol));
        out.a.push_back(type1_polynomial<S>(sys, k, tol));
    }
    out.initials = Mat<S>(r, r);
    for (int i = 1; i <= std::min<long>(r, row_max + 1); ++i)
        for (int j = 1; j <= i; ++j)
            out.initials.at(i - 1, j - 1) = out.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)].coeff_or_zero(0);
    if (row_max + 1 < r)
        throw Error("ladder too short to determine all starting values");

    for (long k = 0; k <= row_max; ++k) {
        std::vector<S> row;
        const Poly<S> xpk = out.p[static_cast<std::size_t>(k)].shifted_up();
        double row_scale = 0;
        for (int j = 0; j <= std::min<long>(r, k); ++j) {
            S v = pair_integral(sys, xpk, out.a[static_cast<std::size_t>(k + 1 - j)]);
            row_scale = std::max(row_scale, approx_abs(v));
            row.push_back(std::move(v));
        }
        // re-derive P_{k+1} from the recurrence and compare with the solve
        Poly<S> pk1 = xpk;
        for (int j = 0; j <= std::min<long>(r, k); ++j)
            pk1 = pk1 - row[static_cast<std::size_t>(j)] * out.p[static_cast<std::size_t>(k - j)];
        const Poly<S>& direct = out.p[static_cast<std::size_t>(k + 1)];
        double pscale = 0;
        for (const auto& c : direct.c) pscale = std::max(pscale, approx_abs(c));
        Poly<S> diff = pk1 - direct;
        for (const auto& c : diff.c) {
            bool bad;
            if constexpr (scalar_is_exact_v<S>)
                bad = !exactly_zero(c);
            else
                bad = approx_abs(c) > tol.tau_consist * std::max(1.0, pscale);
            if (bad)
                throw FormulaMismatch("recurrence row " + std::to_string(k) +
                                      " is inconsistent with the solved polynomial");
        }
        if (k >= r) {
            const S& pivot = row[static_cast<std::size_t>(r)];
            bool zero;
            if constexpr (scalar_is_exact_v<S>)
                zero = exactly_zero(pivot);
            else
                zero = approx_abs(pivot) <= tol.tau_zero * std::max(1.0, row_scale);
            if (zero)
                throw ZeroPivot("trailing recurrence coefficient vanishes at row " + std::to_string(k));
        }
        out.table.rows.push_back(std::move(row));
    }
    return out;
}

template <class S>
RecurrenceTable<S> recurrence_table(const MeasureSystem& sys, long row_max, const BuildTolerances& tol = {}) {
    return build_ladder<S>(sys, row_max, tol).table;
}

// P_0(x)..P_n(x) and derivatives by running the recurrence at a point; the
// point type may differ from the table scalar (complex evaluation, residue
// rings), embed converts coefficients
template <class S, class T, class Embed>
std::pair<std::vector<T>, std::vector<T>> eval_recurrence(const RecurrenceTable<S>& tbl, long n,
                                                          const T& x, Embed embed) {
    if (n < 0) throw Error("eval_recurrence needs n >= 0");
    if (n > 0 && tbl.n_rows() < n)
        throw Error("recurrence table too short: " + std::to_string(tbl.n_rows()) + " rows, need " +
                    std::to_string(n));
    std::vector<T> val, der;
    val.reserve(static_cast<std::size_t>(n + 1));
    der.reserve(static_cast<std::size_t>(n + 1));
    val.push_back(make_one(x));
    der.push_back(make_zero(x));
    for (long k = 0; k < n; ++k) {
        T v = x * val[static_cast<std::size_t>(k)];
        T d = val[static_cast<std::size_t>(k)] + x * der[static_cast<std::size_t>(k)];
        for (int j = 0; j <= std::min<long>(tbl.r, k); ++j) {
            T c = embed(tbl.coeff(k, j));
            v = v - c * val[static_cast<std::size_t>(k - j)];
            d = d - c * der[static_cast<std::size_t>(k - j)];
        }
        val.push_back(std::move(v));
        der.push_back(std::move(d));
    }
    return {std::move(val), std::move(der)};
}

template <class S>
std::pair<std::vector<S>, std::vector<S>> eval_recurrence(const RecurrenceTable<S>& tbl, long n, const S& x) {
    return eval_recurrence(tbl, n, x, [](const S& c) { return c; });
}

// P_0..P_n as polynomials, from the recurrence alone
template <class S>
std::vector<Poly<S>> polys_from_table(const RecurrenceTable<S>& tbl, long n) {
    std::vector<Poly<S>> p;
    p.push_back(Poly<S>::constant(S(1)));
    for (long k = 0; k < n; ++k) {
        Poly<S> next = p[static_cast<std::size_t>(k)].shifted_up();
        for (int j = 0; j <= std::min<long>(tbl.r, k); ++j)
            next = next - tbl.coeff(k, j) * p[static_cast<std::size_t>(k - j)];
        p.push_back(std::move(next));
    }
    return p;
}

// A_0..A_{n_max} as vector polynomials, from the recurrence and the starting
// values: A_{n+r} = (x A_n - A_{n-1} - sum_{j<r} a_{n+j-1,j} A_{n+j}) / a_{n+r-1,r}
template <class S>
std::vector<VectorPoly<S>> type1_sequence(const RecurrenceTable<S>& tbl, const Mat<S>& initials,
                                          long n_max) {
    const int r = tbl.r;
    std::vector<VectorPoly<S>> a;
    a.reserve(static_cast<std::size_t>(n_max + 1));
    for (long i = 0; i <= n_max; ++i) a.emplace_back(static_cast<std::size_t>(r));
    for (long i = 1; i <= std::min<long>(r, n_max); ++i)
        for (int j = 1; j <= i; ++j)
            a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)] =
                Poly<S>::constant(initials.at(i - 1, j - 1));
    for (long n = 1; n + r <= n_max; ++n) {
        const S pivot = tbl.coeff(n + r - 1, r);
        if (exactly_zero(pivot))
            throw ZeroPivot("trailing recurrence coefficient vanishes at row " + std::to_string(n + r - 1));
        VectorPoly<S>& tgt = a[static_cast<std::size_t>(n + r)];
        for (int comp = 0; comp < r; ++comp) {
            Poly<S> acc = a[static_cast<std::size_t>(n)][static_cast<std::size_t>(comp)].shifted_up();
            acc = acc - a[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(comp)];
            for (int j = 0; j < r; ++j)
                acc = acc - tbl.coeff(n + j - 1, j) * a[static_cast<std::size_t>(n + j)][static_cast<std::size_t>(comp)];
            tgt[static_cast<std::size_t>(comp)] = (S(1) / pivot) * acc;
        }
    }
    return a;
}

// pointwise variant of type1_sequence: the values of A_0..A_{n_max} at x
template <class S, class T, class Embed>
std::vector<std::vector<T>> eval_type1(const RecurrenceTable<S>& tbl, const Mat<S>& initials,
                                       long n_max, const T& x, Embed embed) {
    const int r = tbl.r;
    std::vector<std::vector<T>> a(static_cast<std::size_t>(n_max + 1),
                                  std::vector<T>(static_cast<std::size_t>(r), make_zero(x)));
    for (long i = 1; i <= std::min<long>(r, n_max); ++i)
        for (int j = 1; j <= i; ++j)
            a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)] = embed(initials.at(i - 1, j - 1));
    for (long n = 1; n + r <= n_max; ++n) {
        const S pivot_s = tbl.coeff(n + r - 1, r);
        if (exactly_zero(pivot_s))
            throw ZeroPivot("trailing recurrence coefficient vanishes at row " + std::to_string(n + r - 1));
        const T inv_pivot = embed(S(1) / pivot_s); // divide in the coefficient scalar

        for (int comp = 0; comp < r; ++comp) {
            T acc = x * a[static_cast<std::size_t>(n)][static_cast<std::size_t>(comp)];
            acc = acc - a[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(comp)];
            for (int j = 0; j < r; ++j)
                acc = acc - embed(tbl.coeff(n + j - 1, j)) * a[static_cast<std::size_t>(n + j)][static_cast<std::size_t>(comp)];
            a[static_cast<std::size_t>(n + r)][static_cast<std::size_t>(comp)] = inv_pivot * acc;
        }
    }
    return a;
}

} // namespace multiquad
