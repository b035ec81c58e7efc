#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>

#include "multiquad/eigen_qr.hpp"

using namespace multiquad;

namespace {

std::vector<std::complex<double>> sorted_eig(Mat<double> m) {
    auto e = hessenberg_eigenvalues(std::move(m));
    std::sort(e.begin(), e.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return e;
}

// companion matrix in lower Hessenberg-with-unit-superdiagonal form is not
// what the QR driver expects; use the standard upper Hessenberg companion
Mat<double> companion(const std::vector<double>& monic_coeffs) { // c0..c_{n-1}, monic
    const long n = static_cast<long>(monic_coeffs.size());
    Mat<double> m(n, n);
    for (long i = 0; i < n; ++i) m.at(i, n - 1) = -monic_coeffs[static_cast<std::size_t>(i)];
    for (long i = 1; i < n; ++i) m.at(i, i - 1) = 1.0;
    return m;
}

} // namespace

TEST_CASE("small fixed spectra") {
    Mat<double> d(3, 3);
    d.at(0, 0) = 3;
    d.at(1, 1) = 1;
    d.at(2, 2) = 2;
    auto e = sorted_eig(d);
    CHECK(e[0].real() == doctest::Approx(1.0));
    CHECK(e[1].real() == doctest::Approx(2.0));
    CHECK(e[2].real() == doctest::Approx(3.0));

    // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
    auto c = sorted_eig(companion({-6, 11, -6}));
    CHECK(c[0].real() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(c[1].real() == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(c[2].real() == doctest::Approx(3.0).epsilon(1e-10));
    for (const auto& x : c) CHECK(std::abs(x.imag()) < 1e-10);
}

TEST_CASE("complex conjugate pairs survive") {
    // x^2 + 1
    auto e = sorted_eig(companion({1, 0}));
    CHECK(e[0].imag() == doctest::Approx(-1.0));
    CHECK(e[1].imag() == doctest::Approx(1.0));
    CHECK(std::abs(e[0].real()) < 1e-12);
    // (x^2+1)(x-2): x^3 - 2x^2 + x - 2
    auto f = sorted_eig(companion({-2, 1, -2}));
    CHECK(f[0].real() == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(std::abs(f[0].imag() + 1.0) < 1e-8);
    CHECK(f[2].real() == doctest::Approx(2.0));
}

TEST_CASE("clustered and scaled roots") {
    // roots k/10 for k = 1..12
    std::vector<double> roots;
    for (int k = 1; k <= 12; ++k) roots.push_back(k / 10.0);
    std::vector<double> poly{1.0};
    for (double rt : roots) {
        std::vector<double> next(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] += poly[i];
            next[i] -= rt * poly[i];
        }
        poly = std::move(next);
    }
    poly.pop_back(); // drop the leading 1
    auto e = sorted_eig(companion(poly));
    REQUIRE(e.size() == roots.size());
    for (std::size_t i = 0; i < roots.size(); ++i) {
        CHECK(e[i].real() == doctest::Approx(roots[i]).epsilon(1e-6));
        CHECK(std::abs(e[i].imag()) < 1e-8);
    }
}

TEST_CASE("symmetric tridiagonal eigenvalues match the secular roots") {
    // Jacobi matrix of Chebyshev T: eigenvalues are cos((2k-1)pi/(2n))
    const long n = 10;
    Mat<double> j(n, n);
    for (long i = 0; i + 1 < n; ++i) {
        double b = (i == 0) ? std::sqrt(0.5) : 0.5;
        j.at(i, i + 1) = b;
        j.at(i + 1, i) = b;
    }
    auto e = sorted_eig(j);
    for (long k = 0; k < n; ++k) {
        double expect = std::cos((2.0 * (n - k) - 1.0) * M_PI / (2.0 * n));
        CHECK(e[static_cast<std::size_t>(k)].real() == doctest::Approx(expect).epsilon(1e-10));
        CHECK(std::abs(e[static_cast<std::size_t>(k)].imag()) < 1e-12);
    }
}

TEST_CASE("identity and trivial sizes") {
    auto e1 = sorted_eig(Mat<double>::eye(1));
    CHECK(e1[0].real() == doctest::Approx(1.0));
    Mat<double> m2(2, 2);
    m2.at(0, 0) = 4;
    m2.at(0, 1) = 1;
    m2.at(1, 0) = 2;
    m2.at(1, 1) = 3;
    auto e = sorted_eig(m2); // eigenvalues 2 and 5
    CHECK(e[0].real() == doctest::Approx(2.0));
    CHECK(e[1].real() == doctest::Approx(5.0));
}
