#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "multiquad/scalar.hpp"

using namespace multiquad;

TEST_CASE("rational arithmetic basics") {
    Rat a(1, 6), b(1, 3);
    CHECK(a + b == Rat(1, 2));
    CHECK(b - a == a);
    CHECK(a * b == Rat(1, 18));
    CHECK(a / b == Rat(1, 2));
    CHECK(-a == Rat(-1, 6));
    CHECK(Rat(4, 8) == Rat(1, 2)); // canonical form
    CHECK(Rat(3) > Rat(2));
    CHECK(Rat(-1, 2) < Rat(0));
    CHECK(Rat(0).is_zero());
    CHECK(!a.is_zero());
}

TEST_CASE("parse accepts integers, fractions, and decimals") {
    CHECK(Rat::parse("3/4") == Rat(3, 4));
    CHECK(Rat::parse("-7/2") == Rat(-7, 2));
    CHECK(Rat::parse("5") == Rat(5));
    CHECK(Rat::parse("-12") == Rat(-12));
    CHECK(Rat::parse("0.25") == Rat(1, 4));
    CHECK(Rat::parse("-1.5") == Rat(-3, 2));
    CHECK(Rat::parse("2.") == Rat(2));
    CHECK_THROWS_AS(Rat::parse("a/b"), BadInput);
    CHECK_THROWS_AS(Rat::parse(""), BadInput);
    CHECK_THROWS_AS(Rat::parse("1/0"), BadInput);
}

TEST_CASE("str is p/q with plain integers unadorned") {
    CHECK(Rat(1, 2).str() == "1/2");
    CHECK(Rat(-3, 4).str() == "-3/4");
    CHECK(Rat(7).str() == "7");
    CHECK(Rat(0).str() == "0");
    CHECK(Rat::parse(Rat(22, 7).str()) == Rat(22, 7));
}

TEST_CASE("from_double is exact on dyadics") {
    CHECK(Rat::from_double(0.5) == Rat(1, 2));
    CHECK(Rat::from_double(-0.75) == Rat(-3, 4));
    CHECK(Rat::from_double(3.0) == Rat(3));
    const Rat tenth = Rat::from_double(0.1);
    CHECK(tenth != Rat(1, 10)); // 0.1 is not representable
    CHECK(tenth.to_double() == 0.1);
    const double x = 0.6180339887498949;
    CHECK(Rat::from_double(x).to_double() == x);
}

TEST_CASE("pow handles negative exponents") {
    CHECK(Rat(2, 3).pow(3) == Rat(8, 27));
    CHECK(Rat(2, 3).pow(0) == Rat(1));
    CHECK(Rat(2, 3).pow(-2) == Rat(9, 4));
    CHECK(Rat(5).pow(1) == Rat(5));
}

TEST_CASE("scalar protocol helpers") {
    CHECK(scalar_is_exact_v<Rat>);
    CHECK(!scalar_is_exact_v<double>);
    CHECK(exactly_zero(Rat(0)));
    CHECK(!exactly_zero(Rat(1, 1000000)));
    CHECK(exactly_zero(0.0));
    CHECK(approx_abs(Rat(-3, 2)) == doctest::Approx(1.5));
    CHECK(approx_abs(-2.5) == 2.5);
    CHECK(to_scalar<double>(Rat(1, 4)) == 0.25);
    CHECK(to_scalar<Rat>(Rat(1, 4)) == Rat(1, 4));
    CHECK(to_scalar<std::complex<double>>(Rat(1, 2)) == std::complex<double>(0.5, 0.0));
    CHECK(backend_name(Backend::rational) == "rational");
    CHECK(backend_name(Backend::float64) == "float64");
}
