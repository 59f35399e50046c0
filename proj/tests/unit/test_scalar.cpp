#include <doctest.h>

#include <cstring>
#include <random>

#include "shadowlab/scalar.hpp"

using namespace shadowlab;

TEST_CASE("rational text round trip") {
  CHECK(parse_rational("1/3") == Rational(1, 3));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("-7") == Rational(-7));
  CHECK(parse_rational(" 2/4 ") == Rational(1, 2));
  CHECK(format_rational(Rational(6, 4)) == "3/2");
  CHECK(format_rational(Rational(-5)) == "-5");
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-100000, 100000), den(1, 100000);
  for (int i = 0; i < 500; ++i) {
    const Rational q(num(rng), den(rng));
    CHECK(parse_rational(format_rational(q)) == q);
  }
}

TEST_CASE("decimals are read exactly") {
  // 0.1 is not a binary64 value; the parser must not pass through double.
  CHECK(parse_rational("0.1") == Rational(1, 10));
  CHECK(parse_rational("0.1") != Rational(0.1));
}

TEST_CASE("hex floats round trip bit for bit") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    std::uint64_t bits = rng();
    double x;
    std::memcpy(&x, &bits, sizeof x);
    if (!std::isfinite(x)) continue;
    const double y = parse_scalar<double>(format_hexfloat(x));
    CHECK(std::memcmp(&x, &y, sizeof x) == 0);
    CHECK(parse_rational(format_hexfloat(x)) == Rational(x));
  }
}

TEST_CASE("sqrt2 field arithmetic and signs") {
  const QSqrt2 r2 = QSqrt2::sqrt2();
  CHECK(r2 * r2 == QSqrt2(2));
  // Continued fraction convergents alternate around sqrt 2.
  CHECK(QSqrt2(Rational(41, 29)) < r2);
  CHECK(QSqrt2(Rational(99, 70)) > r2);
  CHECK(QSqrt2(Rational(8119, 5741)) < r2);
  CHECK((r2 - QSqrt2(Rational(665857, 470832))).sign() < 0);
  CHECK(QSqrt2(1) / (QSqrt2(1) + r2) == r2 - QSqrt2(1));
  CHECK(parse_qsqrt2("1/2 - 3/4*sqrt2") == QSqrt2(Rational(1, 2), Rational(-3, 4)));
  CHECK(parse_qsqrt2(format_qsqrt2(QSqrt2(Rational(-2, 3), Rational(5, 7)))) ==
        QSqrt2(Rational(-2, 3), Rational(5, 7)));
  CHECK(std::abs(QSqrt2(Rational(1), Rational(1)).to_double() - (1 + std::sqrt(2.0))) < 1e-15);
  CHECK_THROWS(parse_rational("sqrt2"));
  CHECK_THROWS(scalar_cast<Rational>(r2));
}

TEST_CASE("malformed numbers are rejected") {
  for (const char* bad : {"", "1/0", "abc", "1//2", "--", "0x"}) CHECK_THROWS(parse_qsqrt2(bad));
}
