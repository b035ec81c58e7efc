#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "multiquad/linalg.hpp"
#include "multiquad/polynomial.hpp"

using namespace multiquad;

namespace {
Mat<Rat> mat3(std::initializer_list<long> vs) {
    Mat<Rat> m(3, 3);
    long i = 0;
    for (long v : vs) {
        m.at(i / 3, i % 3) = Rat(v);
        ++i;
    }
    return m;
}
} // namespace

TEST_CASE("matrix basics") {
    Mat<Rat> m(2, 3);
    CHECK(m.at(1, 2) == Rat(0)); // value-initialized
    m.at(0, 1) = Rat(5);
    Mat<Rat> t = m.transposed();
    CHECK(t.rows == 3);
    CHECK(t.at(1, 0) == Rat(5));
    Mat<Rat> id = Mat<Rat>::eye(3);
    CHECK(id.at(2, 2) == Rat(1));
    CHECK(id.at(0, 2) == Rat(0));
}

TEST_CASE("determinant by elimination") {
    CHECK(det_elimination(Mat<Rat>(0, 0)) == Rat(1)); // empty product convention
    Mat<Rat> a = mat3({2, 0, 0, 0, 3, 0, 0, 0, 4});
    CHECK(det_elimination(a) == Rat(24));
    Mat<Rat> b = mat3({1, 2, 3, 4, 5, 6, 7, 8, 9});
    CHECK(det_elimination(b) == Rat(0));
    Mat<Rat> c = mat3({0, 1, 2, 1, 0, 3, 4, -3, 8});
    CHECK(det_elimination(c) == Rat(-2)); // needs a row swap
    Mat<double> cd = c.cast<double>([](const Rat& v) { return v.to_double(); });
    CHECK(det_elimination(cd) == doctest::Approx(-2.0));
}

TEST_CASE("division-free determinant matches elimination") {
    Mat<Rat> c = mat3({0, 1, 2, 1, 0, 3, 4, -3, 8});
    CHECK(det_leibniz(c, Rat(0)) == Rat(-2));
    // polynomial entries: det(xI - A) for A = [[0,1],[ -2, 3]] is x^2 - 3x + 2
    Mat<Poly<Rat>> m(2, 2);
    Poly<Rat> x = Poly<Rat>::identity();
    m.at(0, 0) = x;
    m.at(0, 1) = Poly<Rat>::constant(Rat(-1));
    m.at(1, 0) = Poly<Rat>::constant(Rat(2));
    m.at(1, 1) = x - Poly<Rat>::constant(Rat(3));
    Poly<Rat> ch = det_leibniz(m, Poly<Rat>::zero());
    CHECK(ch == Poly<Rat>(std::vector<Rat>{Rat(2), Rat(-3), Rat(1)}));
}

TEST_CASE("rank with exact and float scalars") {
    Mat<Rat> b = mat3({1, 2, 3, 4, 5, 6, 7, 8, 9});
    CHECK(rank_of(b) == 2);
    CHECK(rank_of(mat3({1, 0, 0, 0, 1, 0, 0, 0, 1})) == 3);
    CHECK(rank_of(Mat<Rat>(3, 3)) == 0);
    Mat<double> bd = b.cast<double>([](const Rat& v) { return v.to_double(); });
    CHECK(rank_of(bd) == 2);
}

TEST_CASE("linear solve") {
    Mat<Rat> a = mat3({2, 1, -1, -3, -1, 2, -2, 1, 2});
    std::vector<Rat> rhs{Rat(8), Rat(-11), Rat(-3)};
    std::vector<Rat> x = solve_linear(a, rhs);
    CHECK(x[0] == Rat(2));
    CHECK(x[1] == Rat(3));
    CHECK(x[2] == Rat(-1));
    Mat<Rat> s = mat3({1, 2, 3, 2, 4, 6, 1, 1, 1});
    CHECK_THROWS_AS(solve_linear(s, rhs), SingularSystem);
    Mat<double> ad = a.cast<double>([](const Rat& v) { return v.to_double(); });
    std::vector<double> xd = solve_linear(ad, std::vector<double>{8, -11, -3});
    CHECK(xd[1] == doctest::Approx(3.0));
}
