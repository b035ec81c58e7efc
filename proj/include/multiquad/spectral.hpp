#pragma once

#include <algorithm>
#include <complex>
#include <limits>
#include <vector>

#include "multiquad/cdk.hpp"
#include "multiquad/eigen_qr.hpp"

namespace multiquad {

using Cplx = std::complex<double>;

struct SpectralOptions {
    double tau_eig = 1e-10;  // eigenpair residual, relative
    double tau_sep = 1e-8;   // node separation, relative to the spectral diameter
    double tau_imag = 1e-10; // imaginary part flag, relative to the spectral diameter
    double tau_zero = 1e-12; // structural zero threshold in the left vectors
    long max_sweeps_factor = 40;
    int polish_sweeps = 160;
};

struct NodeSet {
    std::vector<Cplx> x; // sorted by real part, then imaginary
    double diameter = 0; // largest pairwise distance
    double min_separation = 0;
    double max_imag = 0;
    bool simple = true;
    bool real = true;
};

inline Cplx embed_cplx(double v) { return {v, 0.0}; }

// Zeros of P_n. The eigenvalues of the transposed recurrence matrix only seed
// the search: deep tables push the eigenproblem past what double precision QR
// resolves on its own (approximations of distinct zeros collapse, real pairs
// drift complex), while the recurrence evaluation of P_n stays forward
// stable. A simultaneous refinement with pairwise repulsion pulls collapsed
// seeds apart again and converges each point to its own zero.
inline NodeSet spectral_nodes(const RecurrenceTable<double>& tbl, long n,
                              const SpectralOptions& opt = {}) {
    Mat<double> H = hessenberg_matrix(tbl, n).transposed();
    auto ev = hessenberg_eigenvalues(std::move(H), opt.max_sweeps_factor);
    const long m = static_cast<long>(ev.size());
    double re_lo = 0, re_hi = 0;
    for (long i = 0; i < m; ++i) {
        const double re = ev[static_cast<std::size_t>(i)].real();
        re_lo = (i == 0) ? re : std::min(re_lo, re);
        re_hi = (i == 0) ? re : std::max(re_hi, re);
    }
    const double spread = re_hi - re_lo;
    const double scale = spread > 0 ? spread : std::max(1.0, std::abs(re_hi));
    std::sort(ev.begin(), ev.end(), [](const Cplx& a, const Cplx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    {
        // identical seeds would make the repulsion term singular
        Cplx prev;
        long run = 0;
        for (long i = 0; i < m; ++i) {
            const Cplx orig = ev[static_cast<std::size_t>(i)];
            if (i > 0 && orig == prev) {
                ++run;
                ev[static_cast<std::size_t>(i)] += Cplx(0, scale * 1e-8 * static_cast<double>(run));
            } else {
                run = 0;
            }
            prev = orig;
        }
    }
    for (int sweep = 0; sweep < opt.polish_sweeps; ++sweep) {
        double worst = 0;
        for (long i = 0; i < m; ++i) {
            Cplx& x = ev[static_cast<std::size_t>(i)];
            auto [pv, pd] = eval_recurrence(tbl, n, x, embed_cplx);
            const Cplx f = pv[static_cast<std::size_t>(n)];
            const Cplx df = pd[static_cast<std::size_t>(n)];
            if (std::abs(f) == 0.0) continue;
            if (std::abs(df) == 0.0) {
                x += Cplx(scale * 1e-9, scale * 1e-9);
                worst = 1;
                continue;
            }
            const Cplx w = f / df;
            Cplx repel = 0;
            for (long j = 0; j < m; ++j) {
                if (j == i) continue;
                const Cplx d = x - ev[static_cast<std::size_t>(j)];
                if (std::abs(d) > 0.0) repel += 1.0 / d;
            }
            const Cplx denom = Cplx(1, 0) - w * repel;
            const Cplx step = (std::abs(denom) > 0.0) ? w / denom : w;
            x -= step;
            worst = std::max(worst, std::abs(step) / std::max(1.0, std::abs(x)));
        }
        if (worst <= 4e-16) break;
    }
    NodeSet out;
    double pre_snap_imag = 0;
    for (const auto& x : ev) pre_snap_imag = std::max(pre_snap_imag, std::abs(x.imag()));
    for (auto& x : ev)
        if (std::abs(x.imag()) <= opt.tau_imag * scale) x = Cplx(x.real(), 0.0);
    std::sort(ev.begin(), ev.end(), [](const Cplx& a, const Cplx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    out.x = std::move(ev);
    double diam = 0, minsep = 0;
    bool first_pair = true;
    for (long i = 0; i < m; ++i) {
        for (long j = i + 1; j < m; ++j) {
            const double d = std::abs(out.x[static_cast<std::size_t>(i)] - out.x[static_cast<std::size_t>(j)]);
            diam = std::max(diam, d);
            if (first_pair || d < minsep) {
                minsep = d;
                first_pair = false;
            }
        }
    }
    out.diameter = diam;
    out.min_separation = minsep;
    out.max_imag = pre_snap_imag;
    const double rel = diam > 0 ? diam : 1.0;
    out.simple = (m < 2) || (minsep > opt.tau_sep * rel);
    out.real = pre_snap_imag <= opt.tau_imag * rel;
    return out;
}

// (P_0(x), ..., P_{n-1}(x)): the column eigenvector of the recurrence matrix
inline std::vector<Cplx> right_eigenvector(const RecurrenceTable<double>& tbl, long n, const Cplx& x) {
    auto [pv, pd] = eval_recurrence(tbl, n - 1, x, embed_cplx);
    (void)pd;
    return pv;
}

inline double matrix_inf_norm(const Mat<double>& m) {
    double best = 0;
    for (long i = 0; i < m.rows; ++i) {
        double s = 0;
        for (long j = 0; j < m.cols; ++j) s += std::abs(m.at(i, j));
        best = std::max(best, s);
    }
    return best;
}

// ||L v - x v||_inf, relative to ||L||_inf * ||v||_inf
inline double eigen_residual_right(const Mat<double>& L, const Cplx& x, const std::vector<Cplx>& v) {
    const long n = L.rows;
    double vmax = 0;
    for (const auto& c : v) vmax = std::max(vmax, std::abs(c));
    double res = 0;
    for (long i = 0; i < n; ++i) {
        Cplx acc = 0;
        for (long j = 0; j < n; ++j)
            if (L.at(i, j) != 0.0) acc += L.at(i, j) * v[static_cast<std::size_t>(j)];
        acc -= x * v[static_cast<std::size_t>(i)];
        res = std::max(res, std::abs(acc));
    }
    const double scale = std::max(matrix_inf_norm(L), std::abs(x)) * std::max(vmax, 1e-300);
    return res / std::max(scale, 1e-300);
}

// ||u^T L - x u^T||_inf, same scaling; the pairing is bilinear (no conjugation)
inline double eigen_residual_left(const Mat<double>& L, const Cplx& x, const std::vector<Cplx>& u) {
    const long n = L.rows;
    double umax = 0;
    for (const auto& c : u) umax = std::max(umax, std::abs(c));
    double res = 0;
    for (long j = 0; j < n; ++j) {
        Cplx acc = 0;
        for (long i = 0; i < n; ++i)
            if (L.at(i, j) != 0.0) acc += u[static_cast<std::size_t>(i)] * L.at(i, j);
        acc -= x * u[static_cast<std::size_t>(j)];
        res = std::max(res, std::abs(acc));
    }
    const double scale = std::max(matrix_inf_norm(L), std::abs(x)) * std::max(umax, 1e-300);
    return res / std::max(scale, 1e-300);
}

struct LeftVector {
    std::vector<Cplx> u; // scaled so the first structurally nonzero entry is 1
    long k = 0;          // its index, 1-based
    int i = 0;           // the kernel shift that produced the vector
};

// First entry that stands clear of the noise floor. The window is local
// because deep left vectors grade geometrically, so an early entry can sit
// many orders below the largest one and still be genuinely nonzero; only a
// drop to rounding-noise depth against its own neighborhood marks a
// structural zero.
inline long leading_index(const std::vector<Cplx>& u, int r, double tau_zero) {
    const long n = static_cast<long>(u.size());
    for (long k = 0; k < n; ++k) {
        double wmax = 0;
        for (long t = k; t <= std::min<long>(n - 1, k + r); ++t)
            wmax = std::max(wmax, std::abs(u[static_cast<std::size_t>(t)]));
        if (wmax > 0 && std::abs(u[static_cast<std::size_t>(k)]) > tau_zero * wmax) return k;
    }
    return -1;
}

// Left eigenvector at a zero x of P_n from the kernel determinant columns,
// using the shift i with the largest |P_{n-i}(x)|. The raw vector is rescaled
// by its largest entry before the leading-one normalization to keep deep
// levels inside the floating point range.
inline LeftVector left_eigenvector(const RecurrenceTable<double>& tbl, const Mat<double>& initials,
                                   long n, const Cplx& x, const SpectralOptions& opt = {}) {
    auto [pv, pd] = eval_recurrence(tbl, n, x, embed_cplx);
    (void)pd;
    int best_i = 0;
    double best_mag = -1;
    for (int i = 1; i <= std::min<long>(tbl.r, n); ++i) {
        const double mag = std::abs(pv[static_cast<std::size_t>(n - i)]);
        if (mag > best_mag) {
            best_mag = mag;
            best_i = i;
        }
    }
    // monic values at interior points shrink geometrically with the degree, so
    // the trailing block can only be judged against underflow, never against
    // the early entries; bad vectors are caught by the residual checks instead
    if (best_i == 0 || best_mag <= 0.0 || !std::isfinite(best_mag))
        throw NoValidIndex("every trailing polynomial vanishes at the node");
    auto u = q_vector(tbl, initials, n, best_i, x, embed_cplx);
    double umax = 0;
    for (const auto& c : u) umax = std::max(umax, std::abs(c));
    if (umax == 0) throw NoValidIndex("kernel determinant vector vanished at the node");
    for (auto& c : u) c /= umax;
    const long k0 = leading_index(u, tbl.r, opt.tau_zero);
    if (k0 < 0) throw NoValidIndex("left vector has no nonzero leading entry");
    const Cplx lead = u[static_cast<std::size_t>(k0)];
    for (auto& c : u) c /= lead;
    for (long k = 0; k < k0; ++k) u[static_cast<std::size_t>(k)] = 0;
    LeftVector out;
    out.u = std::move(u);
    out.k = k0 + 1;
    out.i = best_i;
    return out;
}

// one inverse-iteration pass on the transposed matrix, as a fallback when the
// determinant route loses accuracy
inline std::vector<Cplx> left_inverse_iteration(const Mat<double>& L, const Cplx& x,
                                                const std::vector<Cplx>& u0) {
    const long n = L.rows;
    Mat<Cplx> A(n, n);
    const double scale = std::max(1.0, std::abs(x));
    const Cplx shift = x + Cplx(1e-13 * scale, 0);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) A.at(i, j) = Cplx(L.at(j, i), 0) - (i == j ? shift : Cplx(0));
    std::vector<Cplx> u = solve_linear(A, u0, 0.0);
    double umax = 0;
    for (const auto& c : u) umax = std::max(umax, std::abs(c));
    if (umax > 0)
        for (auto& c : u) c /= umax;
    return u;
}

struct EigenPair {
    Cplx x;
    std::vector<Cplx> right;
    std::vector<Cplx> left;
    long k = 0; // leading nonzero index of the left vector, 1-based
    int i = 0;  // kernel shift used for the left vector
    double right_residual = 0;
    double left_residual = 0;
    Cplx inner; // u^T v, bilinear
};

struct SpectralDecomposition {
    long n = 0;
    NodeSet nodes;
    std::vector<EigenPair> pairs;
};

inline SpectralDecomposition spectral_decomposition(const RecurrenceTable<double>& tbl,
                                                    const Mat<double>& initials, long n,
                                                    const SpectralOptions& opt = {}) {
    SpectralDecomposition out;
    out.n = n;
    out.nodes = spectral_nodes(tbl, n, opt);
    Mat<double> L = hessenberg_matrix(tbl, n);
    for (const auto& x : out.nodes.x) {
        EigenPair pr;
        pr.x = x;
        pr.right = right_eigenvector(tbl, n, x);
        pr.right_residual = eigen_residual_right(L, x, pr.right);
        if (pr.right_residual > opt.tau_eig)
            throw ResidualTooLarge("right eigenvector residual " + std::to_string(pr.right_residual) +
                                   " exceeds tolerance");
        LeftVector lv;
        try {
            lv = left_eigenvector(tbl, initials, n, x, opt);
            pr.left_residual = eigen_residual_left(L, x, lv.u);
        } catch (const NoValidIndex&) {
            lv.u.assign(static_cast<std::size_t>(n), Cplx(0, 0));
            pr.left_residual = std::numeric_limits<double>::infinity();
        }
        if (pr.left_residual > opt.tau_eig) {
            // the determinant columns lose accuracy deep in the table; restart
            // from a neutral direction, where a single solve against the
            // shifted matrix is normally enough, and keep the best pass
            std::vector<Cplx> it(static_cast<std::size_t>(n), Cplx(1, 0));
            for (int pass = 0; pass < 4 && pr.left_residual > opt.tau_eig; ++pass) {
                it = left_inverse_iteration(L, x, it);
                std::vector<Cplx> cand = it;
                const long k0 = leading_index(cand, tbl.r, opt.tau_zero);
                if (k0 < 0) continue;
                const Cplx lead = cand[static_cast<std::size_t>(k0)];
                for (auto& c : cand) c /= lead;
                for (long k = 0; k < k0; ++k) cand[static_cast<std::size_t>(k)] = 0;
                const double res = eigen_residual_left(L, x, cand);
                if (res < pr.left_residual) {
                    lv.u = std::move(cand);
                    lv.k = k0 + 1;
                    pr.left_residual = res;
                }
            }
            if (pr.left_residual > opt.tau_eig)
                throw ResidualTooLarge("left eigenvector residual " + std::to_string(pr.left_residual) +
                                       " exceeds tolerance");
        }
        pr.left = std::move(lv.u);
        pr.k = lv.k;
        pr.i = lv.i;
        pr.inner = 0;
        for (long t = 0; t < n; ++t)
            pr.inner += pr.left[static_cast<std::size_t>(t)] * pr.right[static_cast<std::size_t>(t)];
        out.pairs.push_back(std::move(pr));
    }
    return out;
}

} // namespace multiquad
