#include "doctest.h"

#include <random>
#include <stdexcept>

#include "decomp/exponent.hpp"
#include "decomp/rational.hpp"

using namespace decomp;

TEST_CASE("rational arithmetic is exact and normalized") {
  Rational a(6, -4);
  CHECK(a.num() == -3);
  CHECK(a.den() == 2);
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 3) * 3 == 1);
  CHECK(Rational(1, 2) < Rational(2, 3));
  CHECK(positive_part(Rational(-1, 5)) == 0);
  CHECK(floor(Rational(-7, 2)) == -4);
  CHECK(ceil(Rational(-7, 2)) == -3);
  CHECK(parse_rational("-3/4") == Rational(-3, 4));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("1e-2") == Rational(1, 100));
  CHECK(rational_from_double(0.1) == Rational(1, 10));
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("rational overflow throws") {
  Rational big(std::int64_t(1) << 62);
  CHECK_THROWS_AS(big * big, std::overflow_error);
}

TEST_CASE("conjugate") {
  CHECK(conjugate(Exponent(2)) == Exponent(2));
  CHECK(conjugate(Exponent(Rational(1, 2))).is_inf());
  CHECK(conjugate(Exponent(1)).is_inf());
  CHECK(conjugate(Exponent(4)) == Exponent(Rational(4, 3)));
  CHECK(conjugate(Exponent::inf()) == Exponent(1));
}

TEST_CASE("lower conjugate") {
  CHECK(lower_conjugate(Exponent(3)) == Exponent(Rational(3, 2)));
  CHECK(lower_conjugate(Exponent::inf()) == Exponent(1));
  CHECK(lower_conjugate(Exponent(Rational(3, 2))) == Exponent(Rational(3, 2)));
  CHECK(lower_conjugate(Exponent(Rational(1, 2))) == Exponent(Rational(1, 2)));
}

TEST_CASE("compound exponent") {
  CHECK(compound(Exponent(2), Exponent(1)).is_inf());
  CHECK(compound(Exponent(1), Exponent(2)) == Exponent(2));
  CHECK(compound(Exponent::inf(), Exponent(3)).is_inf());
  CHECK(compound(Exponent(1), Exponent::inf()) == Exponent(1));
  CHECK(compound(Exponent(2), Exponent(2)).is_inf());
}

TEST_CASE("exponent identities on random rationals") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> num(1, 40), den(1, 12), coin(0, 9);
  auto draw = [&]() { return coin(rng) == 0 ? Exponent::inf() : Exponent(Rational(num(rng), den(rng))); };
  for (int i = 0; i < 2000; ++i) {
    Exponent p = draw(), s = draw(), r = draw();
    CHECK(lower_conjugate(p) <= Exponent(2));
    if (p >= Exponent(1)) CHECK(conjugate(conjugate(p)) == p);
    CHECK(compound(s, r).reciprocal() == positive_part(s.reciprocal() - r.reciprocal()));
    CHECK(compound(s, r).is_inf() == (r <= s));
  }
}

TEST_CASE("exponent parsing") {
  CHECK(parse_exponent("inf").is_inf());
  CHECK(parse_exponent("3/2") == Exponent(Rational(3, 2)));
  CHECK_THROWS(parse_exponent("0"));
  CHECK_THROWS(parse_exponent("-1"));
  CHECK(exponent_from_json(nlohmann::json("inf")).is_inf());
  CHECK(exponent_from_json(nlohmann::json(0.5)) == Exponent(Rational(1, 2)));
  CHECK(exponent_to_json(Exponent(Rational(3, 2))) == nlohmann::json::array({3, 2}));
}
