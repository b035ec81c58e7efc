#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "multiquad/errors.hpp"
#include "multiquad/linalg.hpp"

namespace multiquad {

namespace detail {

inline void eig2x2(double a, double b, double c, double d, std::complex<double>& l1,
                   std::complex<double>& l2) {
    const double mu = 0.5 * (a + d);
    const double det = a * d - b * c;
    const double disc = mu * mu - det;
    if (disc >= 0) {
        const double sq = std::sqrt(disc);
        const double big = mu + (mu >= 0 ? sq : -sq);
        l1 = big;
        l2 = (big != 0.0) ? det / big : mu - (mu >= 0 ? sq : -sq);
    } else {
        const double im = std::sqrt(-disc);
        l1 = {mu, im};
        l2 = {mu, -im};
    }
}

} // namespace detail

// Eigenvalues of a real upper Hessenberg matrix by the implicit double-shift
// QR iteration with deflation and occasional exceptional shifts. Eigenvalue
// accuracy is backward-stable only; callers polish with Newton steps where a
// characteristic polynomial is available.
inline std::vector<std::complex<double>> hessenberg_eigenvalues(Mat<double> h,
                                                                long max_sweeps_factor = 40) {
    const long n = h.rows;
    if (h.cols != n) throw Error("eigenvalue solve needs a square matrix");
    std::vector<std::complex<double>> out;
    out.reserve(static_cast<std::size_t>(n));
    if (n == 0) return out;
    const double eps = 2.220446049250313e-16;
    const long max_sweeps = max_sweeps_factor * n;
    long sweeps = 0;
    long hi = n - 1;
    long iter = 0;
    while (hi >= 0) {
        if (hi == 0) {
            out.emplace_back(h.at(0, 0));
            break;
        }
        long lo = hi;
        while (lo > 0) {
            const double s0 = std::abs(h.at(lo - 1, lo - 1)) + std::abs(h.at(lo, lo));
            const double thresh = eps * (s0 > 0 ? s0 : 1.0);
            if (std::abs(h.at(lo, lo - 1)) <= thresh) {
                h.at(lo, lo - 1) = 0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            out.emplace_back(h.at(hi, hi));
            --hi;
            iter = 0;
            continue;
        }
        if (lo == hi - 1) {
            std::complex<double> l1, l2;
            detail::eig2x2(h.at(lo, lo), h.at(lo, hi), h.at(hi, lo), h.at(hi, hi), l1, l2);
            out.push_back(l1);
            out.push_back(l2);
            hi -= 2;
            iter = 0;
            continue;
        }
        if (++sweeps > max_sweeps)
            throw QRNoConvergence("eigenvalue iteration did not converge within " +
                                  std::to_string(max_sweeps) + " sweeps");
        ++iter;
        double sum, prod;
        if (iter % 12 == 0) {
            // exceptional shift to break slow cycles
            const double t = std::abs(h.at(hi, hi - 1)) + std::abs(h.at(hi - 1, hi - 2));
            sum = 1.5 * t;
            prod = -0.4375 * t * t;
        } else {
            sum = h.at(hi - 1, hi - 1) + h.at(hi, hi);
            prod = h.at(hi - 1, hi - 1) * h.at(hi, hi) - h.at(hi - 1, hi) * h.at(hi, hi - 1);
        }
        // first column of (H - s1 I)(H - s2 I) restricted to the block
        double x = h.at(lo, lo) * h.at(lo, lo) + h.at(lo, lo + 1) * h.at(lo + 1, lo) -
                   sum * h.at(lo, lo) + prod;
        double y = h.at(lo + 1, lo) * (h.at(lo, lo) + h.at(lo + 1, lo + 1) - sum);
        double z = (lo + 2 <= hi) ? h.at(lo + 2, lo + 1) * h.at(lo + 1, lo) : 0.0;
        for (long k = lo; k <= hi - 1; ++k) {
            if (k > lo) {
                x = h.at(k, k - 1);
                y = h.at(k + 1, k - 1);
                z = (k + 2 <= hi) ? h.at(k + 2, k - 1) : 0.0;
            }
            const bool three = (k + 2 <= hi);
            if (!three) z = 0.0;
            const double norm = std::sqrt(x * x + y * y + z * z);
            if (norm == 0) continue;
            const double alpha = (x >= 0) ? -norm : norm;
            const double v0 = x - alpha, v1 = y, v2 = z;
            const double vn2 = v0 * v0 + v1 * v1 + v2 * v2;
            if (vn2 == 0) continue;
            const double beta = 2.0 / vn2;
            const long c0 = (k == lo) ? lo : k - 1;
            for (long c = c0; c <= hi; ++c) {
                double t = v0 * h.at(k, c) + v1 * h.at(k + 1, c);
                if (three) t += v2 * h.at(k + 2, c);
                t *= beta;
                h.at(k, c) -= v0 * t;
                h.at(k + 1, c) -= v1 * t;
                if (three) h.at(k + 2, c) -= v2 * t;
            }
            const long rmax = std::min(hi, k + 3);
            for (long rr = lo; rr <= rmax; ++rr) {
                double t = v0 * h.at(rr, k) + v1 * h.at(rr, k + 1);
                if (three) t += v2 * h.at(rr, k + 2);
                t *= beta;
                h.at(rr, k) -= v0 * t;
                h.at(rr, k + 1) -= v1 * t;
                if (three) h.at(rr, k + 2) -= v2 * t;
            }
            if (k > lo) {
                h.at(k + 1, k - 1) = 0;
                if (three) h.at(k + 2, k - 1) = 0;
            }
        }
    }
    return out;
}

} // namespace multiquad
