#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "multiquad/spectral.hpp"

using namespace multiquad;

namespace {
RecurrenceTable<double> float_table(const MeasureSystem& sys, long row_max) {
    return recurrence_table<Rat>(sys, row_max).cast<double>(
        [](const Rat& v) { return v.to_double(); });
}
} // namespace

TEST_CASE("nodes are real, simple, sorted, and inside the support hull") {
    MeasureSystem sys = sys_power_family(2);
    auto tbl = float_table(sys, 7);
    for (long n = 2; n <= 8; ++n) {
        NodeSet ns = spectral_nodes(tbl, n);
        REQUIRE(static_cast<long>(ns.x.size()) == n);
        CHECK(ns.real);
        CHECK(ns.simple);
        for (long l = 0; l + 1 < n; ++l)
            CHECK(ns.x[static_cast<std::size_t>(l)].real() <
                  ns.x[static_cast<std::size_t>(l + 1)].real());
        for (const Cplx& x : ns.x) {
            CHECK(x.real() > 0.0);
            CHECK(x.real() < 1.0);
        }
        CHECK(ns.min_separation > 1e-8 * ns.diameter);
    }
}

TEST_CASE("nodes split across the two intervals of the disjoint pair") {
    MeasureSystem sys = sys_angelesco();
    auto tbl = float_table(sys, 7);
    NodeSet ns = spectral_nodes(tbl, 6);
    long below = 0, above = 0;
    for (const Cplx& x : ns.x) {
        if (x.real() < 0) ++below;
        if (x.real() > 0) ++above;
        CHECK(std::abs(x.real()) < 1.0);
    }
    CHECK(below == 3); // nu = (3,3)
    CHECK(above == 3);
}

TEST_CASE("node values are zeros of the type II polynomial") {
    MeasureSystem sys = sys_power_family(2);
    LadderData<Rat> lad = build_ladder<Rat>(sys, 7);
    auto tbl = lad.table.cast<double>([](const Rat& v) { return v.to_double(); });
    for (long n = 2; n <= 8; ++n) {
        NodeSet ns = spectral_nodes(tbl, n);
        Poly<Rat> pn = lad.p[static_cast<std::size_t>(n)];
        for (const Cplx& x : ns.x) {
            double val = eval_poly(pn, x.real(), [](const Rat& v) { return v.to_double(); });
            CHECK(std::abs(val) < 1e-9);
        }
    }
}

TEST_CASE("right eigenvectors are polynomial evaluations with small residual") {
    MeasureSystem sys = sys_power_family(2);
    auto tbl = float_table(sys, 7);
    const long n = 6;
    Mat<double> L = hessenberg_matrix(tbl, n);
    NodeSet ns = spectral_nodes(tbl, n);
    for (const Cplx& x : ns.x) {
        std::vector<Cplx> v = right_eigenvector(tbl, n, x);
        CHECK(v[0] == Cplx(1.0, 0.0)); // P_0 = 1
        CHECK(eigen_residual_right(L, x, v) < 1e-10);
    }
}

TEST_CASE("left eigenvectors from the kernel row vector") {
    MeasureSystem sys = sys_power_family(2);
    LadderData<Rat> lad = build_ladder<Rat>(sys, 7);
    auto tbl = lad.table.cast<double>([](const Rat& v) { return v.to_double(); });
    Mat<double> init = lad.initials.cast<double>([](const Rat& v) { return v.to_double(); });
    const long n = 6;
    Mat<double> L = hessenberg_matrix(tbl, n);
    NodeSet ns = spectral_nodes(tbl, n);
    for (const Cplx& x : ns.x) {
        LeftVector u = left_eigenvector(tbl, init, n, x);
        CHECK(eigen_residual_left(L, x, u.u) < 1e-9);
        CHECK(u.k >= 1);
        CHECK(u.u[static_cast<std::size_t>(u.k - 1)] == Cplx(1.0, 0.0)); // leading entry normalized
        for (long t = 0; t + 1 < u.k; ++t)
            CHECK(u.u[static_cast<std::size_t>(t)] == Cplx(0.0, 0.0));
    }
}

TEST_CASE("full decomposition with biorthogonal pairing") {
    MeasureSystem sys = sys_power_family(2);
    LadderData<Rat> lad = build_ladder<Rat>(sys, 7);
    auto tbl = lad.table.cast<double>([](const Rat& v) { return v.to_double(); });
    Mat<double> init = lad.initials.cast<double>([](const Rat& v) { return v.to_double(); });
    for (long n = 2; n <= 8; ++n) {
        SpectralDecomposition dec = spectral_decomposition(tbl, init, n);
        REQUIRE(static_cast<long>(dec.pairs.size()) == n);
        for (const EigenPair& p : dec.pairs) {
            CHECK(p.right_residual < 1e-10);
            CHECK(p.left_residual < 1e-9);
            CHECK(std::abs(p.inner) > 1e-8);
        }
        // pairing across distinct eigenvalues vanishes
        for (std::size_t a = 0; a < dec.pairs.size(); ++a)
            for (std::size_t b0 = 0; b0 < dec.pairs.size(); ++b0) {
                if (a == b0) continue;
                Cplx dot = 0;
                for (long t = 0; t < n; ++t)
                    dot += dec.pairs[a].left[static_cast<std::size_t>(t)] *
                           dec.pairs[b0].right[static_cast<std::size_t>(t)];
                double scale = std::abs(dec.pairs[a].inner);
                CHECK(std::abs(dot) < 1e-7 * std::max(1.0, scale));
            }
    }
}

TEST_CASE("three measures, deeper matrix") {
    MeasureSystem sys = sys_power_family(3);
    LadderData<Rat> lad = build_ladder<Rat>(sys, 9);
    auto tbl = lad.table.cast<double>([](const Rat& v) { return v.to_double(); });
    Mat<double> init = lad.initials.cast<double>([](const Rat& v) { return v.to_double(); });
    SpectralDecomposition dec = spectral_decomposition(tbl, init, 10);
    for (const EigenPair& p : dec.pairs) {
        CHECK(p.right_residual < 1e-9);
        CHECK(p.left_residual < 1e-8);
    }
}
