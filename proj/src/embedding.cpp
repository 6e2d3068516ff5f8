#include "decomp/embedding.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "decomp/errors.hpp"
#include "decomp/weights.hpp"

namespace decomp {

namespace {

using nlohmann::json;

const std::map<std::string, std::string>& anchors() {
  static const std::map<std::string, std::string> table{
      {"suff:p_le_q", "Cor 5.2(1)"},
      {"suff:w_q_over_u", "Cor 5.2(1)"},
      {"suff:refined", "Ex 7.x refined"},
      {"suff:modulation_p_eq_q", "Ex 7.3 modulation"},
      {"nec:p_le_q", "Thm 4.1"},
      {"nec:w_q_over_u", "Cor 5.2(2a)"},
      {"nec:w_over_u_r_conj", "Cor 5.2(2b)"},
      {"nec:khintchine_p", "Cor 5.2(2c-i)"},
      {"nec:khintchine_2", "Cor 5.2(2c-ii)"},
      {"nec:refined", "Ex 7.x refined"},
      {"info:cb", "Cor 3.4(1c)"},
      {"info:bv_reduction", "Cor 6.1"},
      {"info:moderate", "Def 3.x moderate"},
  };
  return table;
}

Evidence make(const std::string& id, bool holds, std::string detail) {
  return Evidence{id, anchor_of(id), holds, std::move(detail)};
}

std::vector<std::int64_t> oracle_radii(int dim) {
  // exp2 of the matrix entries stays finite up to about 2^1000
  std::vector<std::int64_t> out;
  for (auto r : default_schedule(dim))
    if (r <= 256) out.push_back(r);
  return out;
}

struct Engine {
  const FamilySpec& spec;
  Exponent p, r;
  int k;
  SpaceWeight u;
  std::optional<std::vector<std::uint8_t>> I0;
  bool oracle;
  std::vector<OracleRecord>* records;

  QuotientWeight weight(const Exponent& t) const {
    CriterionWeight w = build_weight(spec.covering, &spec.geometry, CriterionKind::UKpq, k, p, t);
    if (!w.symbolic || !u.symbolic) throw UnsupportedWeight("no closed form for the criterion weight");
    return quotient(w, u);
  }

  bool member(const std::string& id, const QuotientWeight& qw, const Exponent& theta, bool on_I0,
              std::string& detail) const {
    ExpPolyWeight w = *qw.symbolic;
    if (on_I0) w = restrict_to(w, *I0);
    bool m = decide_lp_membership(w, theta) == Membership::Member;
    detail = w.str() + (m ? " in l^" : " not in l^") + theta.str();
    if (oracle) {
      auto ev = qw.log2_eval;
      auto from = spec.geometry.from_lattice;
      TailClassification t = truncated_oracle(
          w.regions(), w.dim(), [&](const Point& x) { return ev(from(x)); }, theta, oracle_radii(w.dim()));
      bool bad = (m && t.kind == TailKind::Divergent) || (!m && t.kind == TailKind::Convergent);
      records->push_back(OracleRecord{id, m, t.kind, bad});
      detail += "; oracle " + tail_kind_str(t.kind);
    }
    return m;
  }
};

struct Route {
  std::vector<std::pair<std::string, std::pair<bool, std::string>>> parts;  // key, (holds, detail)
  bool holds() const {
    return std::all_of(parts.begin(), parts.end(), [](const auto& x) { return x.second.first; });
  }
};

std::string cmp_str(const Exponent& a, const char* an, const Exponent& b, const char* bn) {
  std::ostringstream os;
  os << an << " = " << a.str() << (a <= b ? " <= " : " > ") << bn << " = " << b.str();
  return os.str();
}

}  // namespace

const std::string& anchor_of(const std::string& key) {
  std::string k = key;
  if (k.rfind("alt:", 0) == 0) k = "suff:" + k.substr(4);
  auto it = anchors().find(k);
  if (it == anchors().end()) throw std::out_of_range("no anchor for " + key);
  return it->second;
}

std::string target_str(const Target& t) {
  switch (t.kind) {
    case TargetKind::BV: return "BV^" + std::to_string(t.k);
    case TargetKind::Cb: return "C_b^" + std::to_string(t.k);
    default: return "W^{" + std::to_string(t.k) + "," + t.q.str() + "}";
  }
}

Target target_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("target must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "kind" && it.key() != "k" && it.key() != "q")
      throw SchemaError("unknown target key '" + it.key() + "'");
  Target t;
  std::string kind = j.value("kind", std::string("sobolev"));
  if (!j.contains("k") || !j["k"].is_number_integer()) throw SchemaError("target needs an integer 'k'");
  t.k = j["k"].get<int>();
  if (t.k < 0) throw InvalidQuery("k must be >= 0");
  if (kind == "sobolev") {
    if (!j.contains("q")) throw SchemaError("sobolev target needs 'q'");
    t.kind = TargetKind::Sobolev;
    t.q = exponent_from_json(j["q"]);
  } else if (kind == "bv") {
    if (j.contains("q")) throw SchemaError("bv target takes no 'q'");
    t.kind = TargetKind::BV;
    t.q = Exponent(1);
    if (t.k < 1) throw InvalidQuery("BV target requires k >= 1");
  } else if (kind == "cb") {
    if (j.contains("q")) throw SchemaError("cb target takes no 'q'");
    t.kind = TargetKind::Cb;
    t.q = Exponent::inf();
  } else {
    throw SchemaError("unknown target kind '" + kind + "'");
  }
  return t;
}

json target_to_json(const Target& t) {
  json j = json::object();
  j["kind"] = t.kind == TargetKind::Sobolev ? "sobolev" : t.kind == TargetKind::BV ? "bv" : "cb";
  j["k"] = t.k;
  if (t.kind == TargetKind::Sobolev) j["q"] = exponent_to_json(t.q);
  return j;
}

nlohmann::ordered_json verdict_to_json(const Verdict& v) {
  using ojson = nlohmann::ordered_json;
  ojson j = ojson::object();
  j["outcome"] = outcome_str(v.outcome);
  ojson ev = ojson::array();
  for (const auto& e : v.evidence) {
    ojson x = ojson::object();
    x["id"] = e.id;
    x["anchor"] = e.anchor;
    x["holds"] = e.holds;
    x["detail"] = e.detail;
    ev.push_back(x);
  }
  j["evidence"] = ev;
  if (v.gap_note) j["gap_note"] = *v.gap_note;
  return j;
}

Verdict decide_sobolev(const FamilySpec& spec, const Exponent& p, const Exponent& r, int k, const Exponent& q,
                       const DecideOptions& opt) {
  if (k < 0) throw InvalidQuery("k must be >= 0");
  Verdict v;
  Engine eng{spec, p, r, k, space_weight(spec, r), opt.I0 ? opt.I0 : spec.default_I0, opt.oracle_check, &v.oracle};
  if (eng.I0 && eng.I0->empty()) eng.I0.reset();

  Exponent ql = lower_conjugate(q);
  Exponent th_suff = compound(ql, r);
  Exponent th_nec = compound(q, r);
  bool ordered = p <= q;
  std::string ord_detail = cmp_str(p, "p", q, "q");

  QuotientWeight wq = eng.weight(q);

  // sufficient routes
  std::vector<Route> routes;
  {
    Route g;
    std::string d;
    bool m = eng.member("suff:w_q_over_u", wq, th_suff, false, d);
    g.parts.push_back({"p_le_q", {ordered, ord_detail}});
    g.parts.push_back({"w_q_over_u", {m, "w^(q)/u = " + d}});
    routes.push_back(g);
  }
  std::optional<RefinedRules> rr;
  if (opt.refine) rr = refined_criteria(spec, p, r, k, q);
  if (rr) {
    routes.push_back(Route{{{"refined", {rr->sufficient, rr->detail_sufficient}}}});
    if (rr->necessary_suffices)
      routes.push_back(Route{{{"modulation_p_eq_q", {rr->necessary, "alpha = 0, p = q: " + rr->detail_necessary}}}});
  }

  // necessary conditions
  std::vector<Evidence> nec;
  nec.push_back(make("nec:p_le_q", ordered, ord_detail));
  {
    std::string d;
    bool m = eng.member("nec:w_q_over_u", wq, th_nec, false, d);
    nec.push_back(make("nec:w_q_over_u", m, "w^(q)/u = " + d));
  }
  if (q.is_inf()) {
    std::string d;
    bool m = eng.member("nec:w_over_u_r_conj", wq, compound(Exponent(1), r), false, d);
    nec.push_back(make("nec:w_over_u_r_conj", m, "w^(inf)/u = " + d));
  }
  if (eng.I0 && !q.is_inf()) {
    std::string d;
    bool m = eng.member("nec:khintchine_p", eng.weight(p), compound(Exponent(2), r), true, d);
    nec.push_back(make("nec:khintchine_p", m, "on I0: w^(p)/u = " + d));
    if (q >= Exponent(2)) {
      bool m2 = eng.member("nec:khintchine_2", eng.weight(Exponent(2)), compound(Exponent(2), r), true, d);
      nec.push_back(make("nec:khintchine_2", m2, "on I0: w^(2)/u = " + d));
    }
  }
  if (rr) nec.push_back(make("nec:refined", rr->necessary, rr->detail_necessary));

  bool nec_all = std::all_of(nec.begin(), nec.end(), [](const Evidence& e) { return e.holds; });
  std::optional<std::size_t> win;
  for (std::size_t i = 0; i < routes.size() && !win; ++i)
    if (routes[i].holds()) win = i;

  if (win && !nec_all) {
    std::string failed;
    for (const auto& e : nec)
      if (!e.holds) failed += " " + e.id;
    throw std::logic_error("contradiction: sufficient route holds but necessary condition fails:" + failed);
  }
  v.outcome = win ? Outcome::Embeds : (nec_all ? Outcome::Undetermined : Outcome::DoesNotEmbed);

  auto emit = [&](const Route& rt, const std::string& prefix) {
    for (const auto& [key, hd] : rt.parts) v.evidence.push_back(make(prefix + key, hd.first, hd.second));
  };
  if (win) emit(routes[*win], "suff:");
  for (std::size_t i = 0; i < routes.size(); ++i)
    if (!win || i != *win) emit(routes[i], win ? "alt:" : "suff:");
  for (auto& e : nec) v.evidence.push_back(std::move(e));

  if (q.is_inf())
    v.evidence.push_back(make("info:cb", v.outcome == Outcome::Embeds,
                              "W^{k,inf} target coincides with C_b^" + std::to_string(k)));

  if (v.outcome == Outcome::Undetermined) {
    std::ostringstream os;
    os << "sufficient condition fails: w^(q)/u not in l^" << th_suff.str() << " (compound(q_low, r))";
    if (rr) os << " and the refined sufficient rule fails";
    os << "; necessary conditions hold: w^(q)/u in l^" << th_nec.str() << " (compound(q, r))";
    if (rr) os << " and the refined necessary rule holds";
    v.gap_note = os.str();
  }
  return v;
}

Verdict decide_bv(const FamilySpec& spec, const Exponent& p, const Exponent& r, int k, const DecideOptions& opt) {
  if (k < 1) throw InvalidQuery("BV target requires k >= 1");
  Verdict v = decide_sobolev(spec, p, r, k, Exponent(1), opt);
  v.evidence.push_back(make("info:bv_reduction", true,
                            "BV^" + std::to_string(k) + " embedding iff W^{" + std::to_string(k) + ",1} embedding"));
  return v;
}

Verdict decide_cb(const FamilySpec& spec, const Exponent& p, const Exponent& r, int k, const DecideOptions& opt) {
  return decide_sobolev(spec, p, r, k, Exponent::inf(), opt);
}

Verdict decide(const FamilySpec& spec, const Exponent& p, const Exponent& r, const Target& t,
               const DecideOptions& opt) {
  switch (t.kind) {
    case TargetKind::BV: return decide_bv(spec, p, r, t.k, opt);
    case TargetKind::Cb: return decide_cb(spec, p, r, t.k, opt);
    default: return decide_sobolev(spec, p, r, t.k, t.q, opt);
  }
}

Outcome golden_for(const FamilySpec& spec, const Exponent& p, const Exponent& r, const Target& t) {
  switch (t.kind) {
    case TargetKind::BV: return golden_verdict(spec, p, r, t.k, Exponent(1));
    case TargetKind::Cb: return golden_verdict(spec, p, r, t.k, Exponent::inf());
    default: return golden_verdict(spec, p, r, t.k, t.q);
  }
}

}  // namespace decomp
