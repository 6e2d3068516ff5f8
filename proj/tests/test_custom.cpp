#include "doctest.h"

#include <cmath>

#include "decomp/custom.hpp"
#include "decomp/errors.hpp"

using namespace decomp;
using nlohmann::json;

TEST_CASE("index expressions") {
  CHECK(IndexExpr::parse("2^n + 1")({3}) == doctest::Approx(9));
  CHECK(IndexExpr::parse("-2^2")({0}) == doctest::Approx(-4));
  CHECK(IndexExpr::parse("2^3^2")({0}) == doctest::Approx(512));
  CHECK(IndexExpr::parse("abs(m) * exp2(n/2)")({2, -3}) == doctest::Approx(6));
  CHECK(IndexExpr::parse("norm")({3, 4}) == doctest::Approx(5));
  CHECK(IndexExpr::parse("max(i0, i1) - min(i0, i1)")({2, 7}) == doctest::Approx(5));
  CHECK(IndexExpr::parse("sign(n) * pow(abs(n), 1/2)")({-4}) == doctest::Approx(-2));
  CHECK(IndexExpr::parse("log2(sqrt(16))")({0}) == doctest::Approx(2));
  CHECK(IndexExpr::parse("2*pi")({0}) == doctest::Approx(2 * M_PI));
  for (const char* bad : {"", "2 +", "foo(n)", "n)", "(n", "q", "1..2", "max(1)"})
    CHECK_THROWS_AS(IndexExpr::parse(bad), SchemaError);
}

TEST_CASE("custom coverings") {
  auto cov = custom_covering_from_json({{"dimension", 1},
                                        {"indices", "Z"},
                                        {"T", "2^n"},
                                        {"base_set", {{"annulus", {{"inner", 0.25}, {"outer", 4}}}}}});
  CHECK(enumerate_window(cov, 3).size() == 7);
  CHECK(cov.generate({3}).T(0, 0) == doctest::Approx(8));
  auto nb = neighbors(cov, enumerate_window(cov, 8));
  CHECK(nb.n_hat == 7);

  auto mat = custom_covering_from_json({{"dimension", 2},
                                        {"indices", "Z^d"},
                                        {"T", json::array({json::array({"2^n", "0"}), json::array({"0", "2^m"})})},
                                        {"b", json::array({"n", "0"})},
                                        {"base_set", {{"box", {{"lo", {0.5, 0.5}}, {"hi", {2, 2}}}}}}});
  Element e = mat.generate({1, 2});
  CHECK(e.T(1, 1) == doctest::Approx(4));
  CHECK(e.b(0) == doctest::Approx(1));

  CHECK_THROWS_AS(custom_covering_from_json({{"dimension", 1}, {"indices", "Q"}, {"T", "1"},
                                             {"base_set", {{"ball", {{"radius", 1}}}}}}),
                  SchemaError);
  CHECK_THROWS_AS(custom_covering_from_json({{"dimension", 1}, {"indices", "Z"}, {"T", "1"}}), SchemaError);
}
