#include <catch2/catch_amalgamated.hpp>

#include "facmed/rational.hpp"

using namespace facmed;

TEST_CASE("rationals are stored in lowest terms with positive denominator") {
    Rational r = make_rational(6, 4);
    CHECK(numerator(r) == 3);
    CHECK(denominator(r) == 2);

    Rational neg = make_rational(2, -4);
    CHECK(numerator(neg) == -1);
    CHECK(denominator(neg) == 2);

    CHECK(make_rational(1, 2) == make_rational(2, 4));
}

TEST_CASE("parse_rational accepts n and n/d, rejects everything else") {
    CHECK(parse_rational("12/25") == make_rational(12, 25));
    CHECK(parse_rational("-3/6") == make_rational(-1, 2));
    CHECK(parse_rational("7") == Rational(7));
    CHECK(parse_rational("0/1") == Rational(0));

    CHECK_THROWS_AS(parse_rational(""), validation_error);
    CHECK_THROWS_AS(parse_rational("1.5"), validation_error);
    CHECK_THROWS_AS(parse_rational("1/0"), validation_error);
    CHECK_THROWS_AS(parse_rational("1/-2"), validation_error);
    CHECK_THROWS_AS(parse_rational("a/b"), validation_error);
}

TEST_CASE("canonical rendering round-trips") {
    CHECK(rational_str(make_rational(12, 25)) == "12/25");
    CHECK(rational_str(Rational(5)) == "5");
    CHECK(rational_str(make_rational(10, 2)) == "5");
    CHECK(rational_str(make_rational(-3, 9)) == "-1/3");
    CHECK(parse_rational(rational_str(make_rational(148, 50))) == make_rational(74, 25));
}

TEST_CASE("arbitrary precision survives large values") {
    Rational big = parse_rational("123456789012345678901234567890/7");
    CHECK(rational_str(big * 7) == "123456789012345678901234567890");
}
