#pragma once

#include <map>
#include <string>
#include <vector>

#include "multiquad/linalg.hpp"
#include "multiquad/multi_index.hpp"
#include "multiquad/scalar.hpp"

namespace multiquad {

// One measure, described by what we can actually ask of it: moments.
// Three kinds:
//   analytic  - closed-form moment formula ("uniform" on [a,b], "power" x^alpha on [0,1])
//   table     - explicit list of moments m_0..m_{len-1}
//   discrete  - finite point masses
// All moments are exact rationals; backends convert on the way out.
struct Measure {
    enum class Kind { analytic, table, discrete };

    Kind kind = Kind::analytic;
    std::string name;                // analytic formula id
    std::map<std::string, Rat> params;
    std::vector<Rat> table;
    std::vector<Rat> points, masses; // discrete

    static Measure uniform(Rat a, Rat b) {
        Measure m;
        m.kind = Kind::analytic;
        m.name = "uniform";
        m.params["a"] = a;
        m.params["b"] = b;
        return m;
    }
    // x^alpha dx on [0,1], alpha > -1
    static Measure power(Rat alpha) {
        Measure m;
        m.kind = Kind::analytic;
        m.name = "power";
        m.params["alpha"] = alpha;
        return m;
    }
    static Measure from_table(std::vector<Rat> moments) {
        Measure m;
        m.kind = Kind::table;
        m.table = std::move(moments);
        return m;
    }
    static Measure from_points(std::vector<Rat> pts, std::vector<Rat> ms) {
        if (pts.size() != ms.size()) throw BadInput("discrete measure: points/masses length mismatch");
        Measure m;
        m.kind = Kind::discrete;
        m.points = std::move(pts);
        m.masses = std::move(ms);
        return m;
    }

    Rat moment(long ell) const {
        if (ell < 0) throw Error("moment index must be >= 0");
        switch (kind) {
            case Kind::table:
                if (ell >= static_cast<long>(table.size()))
                    throw OutOfTable("moment table has " + std::to_string(table.size()) +
                                     " entries, index " + std::to_string(ell) + " requested");
                return table[static_cast<std::size_t>(ell)];
            case Kind::discrete: {
                Rat acc = 0;
                for (std::size_t i = 0; i < points.size(); ++i)
                    acc += masses[i] * points[i].pow(ell);
                return acc;
            }
            case Kind::analytic:
                break;
        }
        if (name == "uniform") {
            const Rat a = param("a"), b = param("b");
            return (b.pow(ell + 1) - a.pow(ell + 1)) / Rat(ell + 1);
        }
        if (name == "power") {
            const Rat alpha = param("alpha");
            if (alpha <= Rat(-1)) throw UnknownFormula("power measure needs alpha > -1");
            return Rat(1) / (Rat(ell + 1) + alpha);
        }
        throw UnknownFormula("unknown analytic measure: '" + name + "'");
    }

  private:
    Rat param(const std::string& key) const {
        auto it = params.find(key);
        if (it == params.end()) throw UnknownFormula("measure '" + name + "' missing parameter '" + key + "'");
        return it->second;
    }
};

struct MeasureSystem {
    int r = 0;
    Backend backend = Backend::float64;
    std::vector<Measure> measures;

    MeasureSystem() = default;
    MeasureSystem(std::vector<Measure> ms, Backend be = Backend::float64)
        : r(static_cast<int>(ms.size())), backend(be), measures(std::move(ms)) {}

    Rat moment_rat(int j, long ell) const { // j is 1-based
        return measures[static_cast<std::size_t>(j - 1)].moment(ell);
    }
    template <class S>
    S moment(int j, long ell) const {
        return to_scalar<S>(moment_rat(j, ell));
    }

    MeasureSystem sub(int j) const { // single-measure subsystem
        return MeasureSystem({measures[static_cast<std::size_t>(j - 1)]}, backend);
    }
};

// stock systems
inline MeasureSystem sys_lebesgue01(Backend be = Backend::float64) {
    return MeasureSystem({Measure::uniform(0, 1)}, be);
}
// integer-power pair {dx, x dx} on [0,1]; normal only for n <= 2 (the moment
// rows of the second measure duplicate shifted rows of the first from n = 3)
inline MeasureSystem sys_xdx_pair(Backend be = Backend::float64) {
    return MeasureSystem({Measure::power(0), Measure::power(1)}, be);
}
// fractional-power family x^((j-1)/r) dx on [0,1]: an AT system, normal for
// every proper multi-index, moments stay rational
inline MeasureSystem sys_power_family(int r, Backend be = Backend::float64) {
    std::vector<Measure> ms;
    for (int j = 1; j <= r; ++j) ms.push_back(Measure::power(Rat(j - 1, r)));
    return MeasureSystem(std::move(ms), be);
}
inline MeasureSystem sys_angelesco(Backend be = Backend::float64) {
    return MeasureSystem({Measure::uniform(-1, 0), Measure::uniform(0, 1)}, be);
}

// Moment matrix for the proper index of n: rows are grouped by measure, the
// group for measure j holds shifts l = 0..nu(j)-1, and the row for (j,l) is
// (m^(j)_l, m^(j)_{l+1}, ..., m^(j)_{l+n-1}). Full rank n == the index is normal.
template <class S>
struct MomentMatrix {
    MultiIndex nu;
    Mat<S> m;
};

template <class S>
MomentMatrix<S> moment_matrix(const MeasureSystem& sys, long n) {
    MomentMatrix<S> out;
    out.nu = MultiIndex::proper(n, sys.r);
    out.m = Mat<S>(n, n);
    long row = 0;
    for (int j = 1; j <= sys.r; ++j)
        for (long l = 0; l < out.nu(j); ++l, ++row)
            for (long i = 0; i < n; ++i) out.m.at(row, i) = sys.moment<S>(j, l + i);
    return out;
}

struct NormalityReport {
    bool normal = false;
    long rank = 0;
    long n = 0;
};

template <class S>
NormalityReport normality_check(const MeasureSystem& sys, long n, double tau_rank = 1e-10) {
    NormalityReport rep;
    rep.n = n;
    if (n == 0) {
        rep.normal = true;
        return rep;
    }
    auto dm = moment_matrix<S>(sys, n);
    rep.rank = rank_of(dm.m, tau_rank);
    rep.normal = rep.rank == n;
    return rep;
}

} // namespace multiquad
