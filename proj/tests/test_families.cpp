#include "doctest.h"

#include <cmath>
#include <random>

#include "decomp/embedding.hpp"
#include "decomp/errors.hpp"
#include "decomp/families.hpp"

using namespace decomp;
using nlohmann::json;

namespace {

Exponent E(const char* s) { return parse_exponent(s); }

}  // namespace

TEST_CASE("family names round trip") {
  for (auto id : all_families()) CHECK(family_from_name(family_name(id)) == id);
  CHECK_THROWS_AS(family_from_name("besov"), SchemaError);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(instantiate("alpha_modulation", {{"alpha", 1}}), InvalidParams);
  CHECK_THROWS_AS(instantiate("alpha_modulation", {{"alpha", -0.5}}), InvalidParams);
  CHECK_THROWS_AS(instantiate("hom_besov", {{"d", 0}}), InvalidParams);
  CHECK_THROWS_AS(instantiate("hom_besov", {{"t", 1}}), SchemaError);
  CHECK_THROWS_AS(instantiate("diagonal_coorbit", {{"d", 2}, {"alpha", {1}}}), SchemaError);
  CHECK_NOTHROW(instantiate("shearlet_coorbit", {{"c", -2}}));
  auto ib = instantiate("inhom_besov", {{"d", 3}, {"s", "5/2"}});
  json back = params_to_json(ib.id, ib.params);
  CHECK(params_to_json(ib.id, params_from_json(ib.id, back)) == back);
  CHECK(ib.params.s == Rational(5, 2));
}

TEST_CASE("built-in coverings") {
  auto am = instantiate("alpha_modulation", {{"d", 2}, {"alpha", 0.5}});
  Element e = am.covering.generate({3, 4});
  CHECK(e.T.isApprox(Mat::Identity(2, 2) * 5));
  CHECK(e.b.isApprox(Vec((Vec(2) << 15, 20).finished())));

  auto hb = instantiate("hom_besov", json::object());
  Element h = hb.covering.generate({3});
  CHECK(h.T(0, 0) == doctest::Approx(8));
  CHECK(h.b.norm() == 0);
  REQUIRE(std::holds_alternative<Annulus>(h.base));
  CHECK(std::get<Annulus>(h.base).inner == doctest::Approx(0.25));
  CHECK(std::get<Annulus>(h.base).outer == doctest::Approx(4));

  auto dg = instantiate("diagonal_coorbit", {{"d", 1}});
  Element m = dg.covering.generate({2, -1});
  CHECK(m.T(0, 0) == doctest::Approx(-0.25));
  REQUIRE(std::holds_alternative<Box>(m.base));
  CHECK(std::get<Box>(m.base).lo(0) == doctest::Approx(0.5));
  CHECK(std::get<Box>(m.base).hi(0) == doctest::Approx(2));
}

TEST_CASE("golden closed forms") {
  auto co = instantiate("shearlet_coorbit", {{"c", 0.5}, {"beta", 2.4}, {"alpha", 1}});
  CHECK(golden_for(co, E("1"), E("2"), Target{TargetKind::BV, 1, E("1")}) == Outcome::DoesNotEmbed);
  for (double a : {-1.0, 0.0, 1.0, 2.0, 3.0}) {
    auto c2 = instantiate("shearlet_coorbit", {{"c", 0.5}, {"beta", 2.4}, {"alpha", a}});
    CHECK(golden_for(c2, E("1"), E("2"), Target{TargetKind::BV, 1, E("1")}) == Outcome::DoesNotEmbed);
  }
  auto ib = instantiate("inhom_besov", {{"d", 3}, {"s", 2.5}});
  CHECK(golden_verdict(ib, E("1"), E("1"), 1, E("2")) == Outcome::Embeds);
  auto hb = instantiate("hom_besov", {{"d", 1}, {"s", "11/10"}});
  CHECK(golden_verdict(hb, E("1"), E("1"), 0, E("2")) == Outcome::DoesNotEmbed);
  auto hb2 = instantiate("hom_besov", {{"d", 1}, {"s", "1/2"}});
  CHECK(golden_verdict(hb2, E("1"), E("1"), 0, E("2")) == Outcome::Embeds);
  CHECK(golden_verdict(hb2, E("1"), E("1"), 1, E("2")) == Outcome::DoesNotEmbed);
}

TEST_CASE("thresholds") {
  auto ib = instantiate("inhom_besov", {{"d", 3}});
  CHECK(smoothness_threshold(ib, E("1"), E("1"), 1, E("2")) == Rational(5, 2));
  auto am = instantiate("alpha_modulation", {{"d", 1}, {"alpha", 0}});
  CHECK(smoothness_threshold(am, E("3"), E("2"), 0, E("3")) == Rational(1, 6));
  auto co = instantiate("shearlet_coorbit", json::object());
  CHECK_THROWS(smoothness_threshold(co, E("1"), E("1"), 0, E("2")));
}

TEST_CASE("refined criteria") {
  auto ib = instantiate("inhom_besov", {{"d", 1}, {"s", 0}});
  CHECK(golden_verdict(ib, E("4"), E("2"), 0, E("4")) == Outcome::Embeds);
  CHECK(golden_verdict(ib, E("4"), E("3"), 0, E("4")) == Outcome::DoesNotEmbed);
  CHECK_FALSE(refined_criteria(ib, E("4"), E("2"), 0, E("2")));
  CHECK_FALSE(refined_criteria(ib, E("4"), E("2"), 0, Exponent::inf()));
  auto rr = refined_criteria(ib, E("4"), E("2"), 0, E("4"));
  REQUIRE(rr);
  CHECK(rr->sufficient);

  for (const char* s : {"0", "1/8", "1/4", "1"})
    for (const char* r : {"1", "2", "4", "inf"}) {
      auto am = instantiate("alpha_modulation", {{"d", 1}, {"alpha", 0}, {"gamma", s}});
      auto v = golden_verdict(am, E("4"), E(r), 0, E("4"));
      CHECK(v != Outcome::Undetermined);
      CHECK(decide_sobolev(am, E("4"), E(r), 0, E("4"), {.refine = true}).outcome == v);
    }
  auto co = instantiate("shearlet_coorbit", json::object());
  CHECK_FALSE(refined_criteria(co, E("4"), E("2"), 0, E("4")));
}

TEST_CASE("coorbit decisions agree with the oracle") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> quarter(-8, 12);
  const std::vector<Exponent> ex{E("1/2"), E("1"), E("2"), Exponent::inf()};
  for (int n = 0; n < 50; ++n) {
    double c = std::vector<double>{-1, 0.5, 1, 2}[rng() % 4];
    json params = {{"c", c}, {"alpha", quarter(rng) / 4.0}, {"beta", quarter(rng) / 4.0}};
    auto f = instantiate("shearlet_coorbit", params);
    Exponent p = ex[rng() % ex.size()], r = ex[rng() % ex.size()];
    int k = static_cast<int>(rng() % 2);
    auto v = decide_sobolev(f, p, r, k, Exponent(1), {.oracle_check = true});
    INFO(params.dump() << " p=" << p.str() << " r=" << r.str() << " k=" << k);
    for (const auto& o : v.oracle) CHECK_FALSE(o.disagrees);
  }
}

TEST_CASE("diagonal group factorises over coordinates") {
  const std::vector<const char*> vals{"-1/2", "0", "1/2", "1", "3/2"};
  std::mt19937_64 rng(7);
  for (int n = 0; n < 40; ++n) {
    const char* a1 = vals[rng() % vals.size()];
    const char* b1 = vals[rng() % vals.size()];
    const char* a2 = vals[rng() % vals.size()];
    const char* b2 = vals[rng() % vals.size()];
    Exponent p = rng() % 2 ? E("1") : E("2");
    Exponent r = rng() % 2 ? E("1") : E("2");
    auto both = instantiate("diagonal_coorbit", {{"d", 2}, {"alpha", {a1, a2}}, {"beta", {b1, b2}}});
    auto one = instantiate("diagonal_coorbit", {{"d", 1}, {"alpha", {a1}}, {"beta", {b1}}});
    auto two = instantiate("diagonal_coorbit", {{"d", 1}, {"alpha", {a2}}, {"beta", {b2}}});
    for (int k : {0, 1}) {
      auto g = golden_verdict(both, p, r, k, Exponent::inf());
      bool e1 = golden_verdict(one, p, r, k, Exponent::inf()) == Outcome::Embeds;
      bool e2 = golden_verdict(two, p, r, k, Exponent::inf()) == Outcome::Embeds;
      INFO(a1 << " " << b1 << " " << a2 << " " << b2 << " k=" << k);
      CHECK((g == Outcome::Embeds) == (e1 && e2));
    }
  }
}
