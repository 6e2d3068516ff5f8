#include "doctest.h"

#include <random>

#include "decomp/embedding.hpp"
#include "decomp/errors.hpp"

using namespace decomp;
using nlohmann::json;

namespace {

Exponent E(const char* s) { return parse_exponent(s); }

const Evidence* find(const Verdict& v, const std::string& id) {
  for (const auto& e : v.evidence)
    if (e.id == id) return &e;
  return nullptr;
}

}  // namespace

TEST_CASE("Sobolev examples") {
  auto ib = instantiate("inhom_besov", {{"d", 1}, {"s", 0}});
  auto v = decide_sobolev(ib, E("2"), E("2"), 0, E("2"));
  CHECK(v.outcome == Outcome::Embeds);
  CHECK_FALSE(v.gap_note);
  REQUIRE(find(v, "suff:w_q_over_u"));
  CHECK(find(v, "suff:w_q_over_u")->holds);
  CHECK(find(v, "suff:w_q_over_u")->anchor == "Cor 5.2(1)");

  for (const char* s : {"0", "1", "7/2"})
    for (const char* p : {"1/2", "1", "inf"}) {
      auto hb = instantiate("hom_besov", {{"d", 2}, {"s", s}});
      CHECK(decide_sobolev(hb, E(p), E("1"), 1, E("2")).outcome == Outcome::DoesNotEmbed);
      CHECK(decide_sobolev(hb, E(p), E("3"), 2, Exponent::inf()).outcome == Outcome::DoesNotEmbed);
    }
  auto hb = instantiate("hom_besov", {{"d", 2}, {"s", 1}});
  CHECK(decide_sobolev(hb, E("1"), E("1"), 0, E("2")).outcome == Outcome::Embeds);

  auto am = instantiate("alpha_modulation", {{"d", 1}, {"alpha", 0}, {"gamma", 0.1}});
  auto u = decide_sobolev(am, E("3"), E("2"), 0, E("3"));
  CHECK(u.outcome == Outcome::Undetermined);
  CHECK(u.gap_note);
  auto uj = verdict_to_json(u);
  CHECK(std::prev(uj.end()).key() == "gap_note");
  CHECK_FALSE(find(u, "suff:w_q_over_u")->holds);
  CHECK(find(u, "nec:w_q_over_u")->holds);
  CHECK(decide_sobolev(am, E("3"), E("2"), 0, E("3"), {.refine = true}).outcome != Outcome::Undetermined);
}

TEST_CASE("BV and Cb examples") {
  auto co0 = instantiate("shearlet_coorbit", {{"c", 0.5}, {"alpha", 0}, {"beta", 0}});
  for (const char* p : {"1/2", "1", "2"})
    for (const char* r : {"1/2", "1", "inf"})
      CHECK(decide_bv(co0, E(p), E(r), 1).outcome == Outcome::DoesNotEmbed);
  auto co = instantiate("shearlet_coorbit", {{"c", 0.5}, {"alpha", "7/4"}, {"beta", 2}});
  auto bv = decide_bv(co, E("1"), E("1"), 1);
  CHECK(bv.outcome == Outcome::Embeds);
  REQUIRE(find(bv, "info:bv_reduction"));
  CHECK(find(bv, "info:bv_reduction")->anchor == "Cor 6.1");
  CHECK(decide_bv(co, E("2"), E("1"), 1).outcome == Outcome::DoesNotEmbed);
  CHECK_THROWS_AS(decide_bv(co, E("1"), E("1"), 0), InvalidQuery);

  auto ib = instantiate("inhom_besov", {{"d", 1}, {"s", 0}});
  auto cb = decide_cb(ib, Exponent::inf(), E("1"), 0);
  CHECK(cb.outcome == Outcome::Embeds);
  CHECK(find(cb, "info:cb"));
  auto hb = instantiate("hom_besov", {{"s", 1}});
  CHECK(decide_cb(hb, E("1"), E("1"), 1).outcome == Outcome::DoesNotEmbed);

  // gamma = d[alpha/p + (1 - alpha)(1 - 1/2)] with alpha = 0; strict inequality needed since r > q_lower = 1
  auto am = instantiate("alpha_modulation", {{"d", 1}, {"alpha", 0}, {"gamma", 0.5}});
  CHECK(decide_cb(am, E("2"), E("2"), 0).outcome == Outcome::DoesNotEmbed);
  auto am2 = instantiate("alpha_modulation", {{"d", 1}, {"alpha", 0}, {"gamma", "1/2"}});
  CHECK(decide_cb(am2, E("2"), E("1"), 0).outcome == Outcome::Embeds);
}

TEST_CASE("evidence layout") {
  auto ib = instantiate("inhom_besov", {{"d", 1}, {"s", 3}});
  auto v = decide_sobolev(ib, E("1"), E("1"), 1, Exponent::inf());
  REQUIRE(v.outcome == Outcome::Embeds);
  CHECK(v.evidence.front().id.rfind("suff:", 0) == 0);
  bool seen_nec = false;
  for (const auto& e : v.evidence) {
    if (e.id.rfind("nec:", 0) == 0) seen_nec = true;
    if (seen_nec) CHECK(e.id.rfind("suff:", 0) != 0);
    if (seen_nec) CHECK(e.id.rfind("alt:", 0) != 0);
    CHECK_FALSE(e.anchor.empty());
  }
  CHECK(find(v, "nec:w_over_u_r_conj"));
  CHECK(find(v, "info:cb"));

  auto j = verdict_to_json(v);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"outcome", "evidence"});
  std::vector<std::string> ek;
  for (auto it = j["evidence"][0].begin(); it != j["evidence"][0].end(); ++it) ek.push_back(it.key());
  CHECK(ek == std::vector<std::string>{"id", "anchor", "holds", "detail"});
}

TEST_CASE("I0 conditions") {
  auto ib = instantiate("inhom_besov", {{"d", 1}, {"s", 1}});
  auto with = decide_sobolev(ib, E("1"), E("2"), 0, E("2"));
  CHECK(find(with, "nec:khintchine_p"));
  CHECK(find(with, "nec:khintchine_2"));
  DecideOptions off;
  off.I0 = std::vector<std::uint8_t>{};
  auto without = decide_sobolev(ib, E("1"), E("2"), 0, E("2"), off);
  CHECK_FALSE(find(without, "nec:khintchine_p"));
  auto at_inf = decide_sobolev(ib, E("1"), E("2"), 0, Exponent::inf());
  CHECK_FALSE(find(at_inf, "nec:khintchine_p"));
}

TEST_CASE("no contradictions and monotone in smoothness") {
  std::mt19937_64 rng(2024);
  const std::vector<const char*> ex{"1/2", "1", "3/2", "2", "3", "inf"};
  for (int n = 0; n < 300; ++n) {
    Exponent p = E(ex[rng() % ex.size()]), r = E(ex[rng() % ex.size()]), q = E(ex[rng() % ex.size()]);
    int k = static_cast<int>(rng() % 3);
    int d = 1 + static_cast<int>(rng() % 3);
    Outcome prev = Outcome::DoesNotEmbed;
    for (int s4 = -4; s4 <= 24; s4 += 2) {
      auto f = instantiate("inhom_besov", {{"d", d}, {"s", s4 / 4.0}});
      Verdict v;
      REQUIRE_NOTHROW(v = decide_sobolev(f, p, r, k, q, {.refine = true}));
      if (prev == Outcome::Embeds) CHECK(v.outcome == Outcome::Embeds);
      if (v.outcome != Outcome::Undetermined) prev = v.outcome;
      for (const auto& e : v.evidence)
        if (e.id.rfind("nec:", 0) == 0 && !e.holds) CHECK(v.outcome == Outcome::DoesNotEmbed);
    }
  }
}

TEST_CASE("targets") {
  CHECK(target_from_json({{"kind", "bv"}, {"k", 1}}).kind == TargetKind::BV);
  auto t = target_from_json({{"kind", "sobolev"}, {"k", 2}, {"q", "3/2"}});
  CHECK(t.q == E("3/2"));
  CHECK(target_from_json(target_to_json(t)).k == 2);
  CHECK_THROWS(target_from_json({{"kind", "holder"}}));
}
