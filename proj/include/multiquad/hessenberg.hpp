#pragma once

#include "multiquad/mop.hpp"

namespace multiquad {

// Banded lower Hessenberg matrix of the recurrence: unit superdiagonal,
// a_{k,j} at (k, k-j). Its characteristic polynomial is P_n.
template <class S>
Mat<S> hessenberg_matrix(const RecurrenceTable<S>& tbl, long n) {
    if (n < 0) throw Error("hessenberg_matrix needs n >= 0");
    if (tbl.n_rows() < n)
        throw Error("recurrence table too short: " + std::to_string(tbl.n_rows()) + " rows, need " +
                    std::to_string(n));
    Mat<S> m(n, n);
    for (long k = 0; k < n; ++k) {
        if (k + 1 < n) m.at(k, k + 1) = S(1);
        for (int j = 0; j <= std::min<long>(tbl.r, k); ++j) m.at(k, k - j) = tbl.coeff(k, j);
    }
    return m;
}

} // namespace multiquad
