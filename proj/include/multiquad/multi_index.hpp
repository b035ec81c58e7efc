#pragma once

#include <vector>

#include "multiquad/errors.hpp"

namespace multiquad {

// Near-equal split of n over r components: (m+1) repeated s times followed by
// m repeated r-s times, where n = m*r + s with 0 < s <= r. For n = 0 all
// components are zero.
struct MultiIndex {
    int r = 0;
    long n = 0;
    std::vector<long> comp; // comp[j-1] is the j-th component

    static MultiIndex proper(long n, int r) {
        if (r < 1) throw Error("multi-index: r must be >= 1");
        if (n < 0) throw Error("multi-index: n must be >= 0");
        MultiIndex mi;
        mi.r = r;
        mi.n = n;
        mi.comp.assign(static_cast<std::size_t>(r), 0);
        if (n > 0) {
            long m = (n - 1) / r;
            long s = n - m * r; // 0 < s <= r
            for (int j = 0; j < r; ++j) mi.comp[static_cast<std::size_t>(j)] = (j < s) ? m + 1 : m;
        }
        return mi;
    }

    long operator()(int j) const { return comp[static_cast<std::size_t>(j - 1)]; } // 1-based
    long sum() const {
        long t = 0;
        for (long c : comp) t += c;
        return t;
    }
};

} // namespace multiquad
