// decomp_embed: decide embeddings of decomposition spaces, inspect coverings, check sequence-space embeddings.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "decomp/custom.hpp"
#include "decomp/embedding.hpp"
#include "decomp/errors.hpp"
#include "decomp/grid.hpp"

using nlohmann::json;
using namespace decomp;

namespace {

enum Exit : int {
  kEmbeds = 0,
  kNotEmbeds = 1,
  kUndetermined = 2,
  kOracle = 10,
  kUsage = 64,
  kSchema = 65,
  kUnsupported = 70,
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json(const std::string& text, const char* what) {
  std::string body = text;
  if (!text.empty() && text[0] == '@') {
    std::ifstream in(text.substr(1));
    if (!in) throw UsageError(std::string("cannot read ") + what + " file " + text.substr(1));
    std::stringstream ss;
    ss << in.rdbuf();
    body = ss.str();
  }
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  }
}

Exponent exponent_arg(const std::string& text, const char* name) {
  try {
    return parse_exponent(text);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--") + name + ": " + e.what());
  }
}

template <class J>
void emit(const J& j) {
  std::cout << j.dump() << "\n";
}

std::string fixed(double x, int prec = 4) {
  std::ostringstream os;
  os << std::setprecision(prec) << x;
  return os.str();
}

void print_verdict_table(const nlohmann::ordered_json& v) {
  std::cout << "outcome: " << v["outcome"].get<std::string>() << "\n";
  std::size_t w_id = 2, w_an = 6;
  for (const auto& e : v["evidence"]) {
    w_id = std::max(w_id, e["id"].get<std::string>().size());
    w_an = std::max(w_an, e["anchor"].get<std::string>().size());
  }
  std::cout << std::left << std::setw(static_cast<int>(w_id) + 2) << "id" << std::setw(static_cast<int>(w_an) + 2)
            << "anchor" << std::setw(7) << "holds"
            << "detail\n";
  for (const auto& e : v["evidence"])
    std::cout << std::left << std::setw(static_cast<int>(w_id) + 2) << e["id"].get<std::string>()
              << std::setw(static_cast<int>(w_an) + 2) << e["anchor"].get<std::string>() << std::setw(7)
              << (e["holds"].get<bool>() ? "yes" : "no") << e["detail"].get<std::string>() << "\n";
  if (v.contains("gap_note")) std::cout << "gap: " << v["gap_note"].get<std::string>() << "\n";
}

std::vector<std::uint8_t> parse_I0(const std::string& text) {
  std::vector<std::uint8_t> out;
  if (text == "none") return out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "Z" || tok == "all") out.push_back(kAllZ);
    else if (tok == "N0") out.push_back(kN0);
    else if (tok == "pos") out.push_back(kPos);
    else if (tok == "neg") out.push_back(kNeg);
    else if (tok == "nonpos") out.push_back(kNonPos);
    else if (tok == "nonzero") out.push_back(kNonZero);
    else if (tok == "zero") out.push_back(kZeroPt);
    else throw UsageError("--I0: unknown sector '" + tok + "'");
  }
  return out;
}

struct DecideArgs {
  std::string family, params = "{}", p, r, q, target = "sobolev", I0;
  int k = 0;
  bool refine = false, oracle = false;
};

int cmd_decide(const DecideArgs& a, bool pretty) {
  json params = read_json(a.params, "--params");
  if (a.family == "custom")
    throw UnsupportedWeight("custom coverings have no closed-form criterion weight; decide needs a built-in family");
  FamilySpec spec = instantiate(a.family, params);
  Exponent p = exponent_arg(a.p, "p");
  Exponent r = exponent_arg(a.r, "r");
  Target t;
  t.k = a.k;
  if (a.k < 0) throw UsageError("--k must be >= 0");
  if (a.target == "sobolev") {
    if (a.q.empty()) throw UsageError("--q is required for a sobolev target");
    t.kind = TargetKind::Sobolev;
    t.q = exponent_arg(a.q, "q");
  } else if (a.target == "bv") {
    if (!a.q.empty()) throw UsageError("--q is not allowed for a bv target");
    if (a.k < 1) throw UsageError("bv target requires --k >= 1");
    t.kind = TargetKind::BV;
  } else if (a.target == "cb") {
    if (!a.q.empty()) throw UsageError("--q is not allowed for a cb target");
    t.kind = TargetKind::Cb;
  } else {
    throw UsageError("--target must be sobolev, cb or bv");
  }
  DecideOptions opt;
  opt.refine = a.refine;
  opt.oracle_check = a.oracle;
  if (!a.I0.empty()) opt.I0 = parse_I0(a.I0);

  ModerateReport mod = check_moderate(
      spec.covering, [&](const Index& i) { return spec.log2_space(i, r); }, 3);

  Verdict v = decide(spec, p, r, t, opt);
  v.evidence.push_back(Evidence{"info:moderate", anchor_of("info:moderate"), true,
                                spec.moderate_note + "; observed C_uQ " + fixed(mod.c_hat) + " (radius 3), " +
                                    fixed(mod.c_hat_next) + " (radius 4)"});
  auto out = verdict_to_json(v);
  bool disagree = false;
  for (const auto& o : v.oracle) {
    if (!o.disagrees) continue;
    disagree = true;
    std::cerr << "oracle disagrees on " << o.id << ": symbolic " << (o.decided_member ? "member" : "not member")
              << ", oracle " << tail_kind_str(o.oracle) << "\n";
  }
  if (pretty) {
    print_verdict_table(out);
  } else {
    emit(out);
  }
  if (disagree) return kOracle;
  switch (v.outcome) {
    case Outcome::Embeds: return kEmbeds;
    case Outcome::DoesNotEmbed: return kNotEmbeds;
    default: return kUndetermined;
  }
}

AffineCovering covering_for(const std::string& family, const json& params) {
  if (family == "custom") {
    if (!params.is_object() || !params.contains("custom") || params.size() != 1)
      throw SchemaError("custom covering params must be {\"custom\": {...}}");
    return custom_covering_from_json(params["custom"]);
  }
  return instantiate(family, params).covering;
}

int cmd_inspect(const std::string& family, const std::string& params_text, int radius, bool pretty) {
  if (radius < 0) throw UsageError("--radius must be >= 0");
  AffineCovering cov = covering_for(family, read_json(params_text, "--params"));
  auto report = [&](int rad) {
    auto win = enumerate_window(cov, rad);
    auto nb = neighbors(cov, win);
    return std::make_tuple(win, nb, certify_constants(cov, win, nb));
  };
  auto [win, nb, cert] = report(radius);
  auto [win2, nb2, cert2] = report(radius + 1);
  json j = json::object();
  j["covering"] = cov.name;
  j["radius"] = radius;
  j["window_size"] = cert.window_size;
  j["n_hat"] = cert.n_hat;
  j["c_hat"] = cert.c_hat;
  j["r_hat"] = cert.r_hat;
  j["tightness_ok"] = cert.tightness_ok ? json(*cert.tightness_ok) : json(nullptr);
  json viol = json::array();
  for (const auto& i : cert.invertibility_violations) viol.push_back(index_str(i));
  j["invertibility_violations"] = viol;
  j["conservative_pairs"] = cert.conservative_pairs;
  try {
    SurrogateReport s = norm_surrogate_check(cov, win);
    j["norm_surrogate"] = {{"count", s.count}, {"min_ratio", s.min_ratio}, {"max_ratio", s.max_ratio},
                           {"spread", s.spread}};
  } catch (const MissingTightnessWitness& e) {
    j["norm_surrogate"] = nullptr;
  }
  j["next_radius"] = {{"radius", radius + 1}, {"n_hat", cert2.n_hat}, {"c_hat", cert2.c_hat}};
  j["stable"] = cert.n_hat == cert2.n_hat && std::abs(cert.c_hat - cert2.c_hat) <= 1e-9 * std::max(1.0, cert.c_hat);
  std::cout << (pretty ? j.dump(2) : j.dump()) << "\n";
  return 0;
}

int cmd_check_sequence(const std::string& u_text, const std::string& v_text, const std::string& r_text,
                       const std::string& s_text, bool oracle, bool pretty) {
  ExpPolyWeight u = weight_from_json(read_json(u_text, "--u"));
  ExpPolyWeight v = weight_from_json(read_json(v_text, "--v"));
  Exponent r = exponent_arg(r_text, "r");
  Exponent s = exponent_arg(s_text, "s");
  SequenceDecision d = decide_sequence_embedding(u, v, r, s);
  json j = json::object();
  j["embeds"] = d.embeds;
  j["exponent"] = exponent_to_json(d.exponent);
  bool disagree = false;
  if (oracle) {
    TailClassification t = truncated_oracle(u / v, d.exponent);
    j["oracle"] = tail_to_json(t);
    disagree = (d.embeds && t.kind == TailKind::Divergent) || (!d.embeds && t.kind == TailKind::Convergent);
  }
  std::cout << (pretty ? j.dump(2) : j.dump()) << "\n";
  if (disagree) return kOracle;
  return d.embeds ? kEmbeds : kNotEmbeds;
}

int cmd_verify_family(const std::string& family, bool pretty) {
  FamilyId id = family_from_name(family);
  GridSummary s = run_golden_grid(id);
  json j = json::object();
  j["family"] = family;
  j["queries"] = s.queries;
  j["agree"] = s.agree;
  j["disagree"] = s.queries - s.agree - s.errors;
  j["errors"] = s.errors;
  j["undetermined"] = s.undetermined;
  j["failures"] = s.first_failures;
  if (pretty) {
    std::cout << family << ": " << s.agree << "/" << s.queries << " agree, " << s.undetermined
              << " undetermined, " << s.errors << " errors\n";
    for (const auto& f : s.first_failures) std::cout << "  " << f << "\n";
  } else {
    std::cout << j.dump() << "\n";
  }
  return s.agree == s.queries ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Embeddings of decomposition spaces into Sobolev, C_b and BV spaces"};
  app.require_subcommand(1);
  bool pretty = false;
  app.add_flag("--pretty", pretty, "human-readable output");

  DecideArgs da;
  auto* dec = app.add_subcommand("decide", "decide an embedding");
  dec->add_option("--family", da.family, "family id or custom")->required();
  dec->add_option("--params", da.params, "family parameters as JSON (or @file)");
  dec->add_option("--p", da.p, "integrability exponent of the source")->required();
  dec->add_option("--r", da.r, "sequence space exponent of the source")->required();
  dec->add_option("--target", da.target, "sobolev, cb or bv");
  dec->add_option("--k", da.k, "derivative order");
  dec->add_option("--q", da.q, "Sobolev integrability exponent");
  dec->add_option("--I0", da.I0, "sectors of the Khintchine subset, comma separated, or none");
  dec->add_flag("--refine", da.refine, "apply family refinements for q in (2, inf)");
  dec->add_flag("--oracle-check", da.oracle, "re-validate every summability decision numerically");
  dec->add_flag("--pretty", pretty, "human-readable output");

  std::string ic_family, ic_params = "{}";
  int ic_radius = 6;
  auto* ins = app.add_subcommand("inspect-covering", "certify covering constants on a window");
  ins->add_option("--family", ic_family, "family id or custom")->required();
  ins->add_option("--params", ic_params, "family parameters, or {\"custom\": {...}}");
  ins->add_option("--radius", ic_radius, "window radius");
  ins->add_flag("--pretty", pretty, "indented output");

  std::string cs_u, cs_v, cs_r, cs_s;
  bool cs_oracle = false;
  auto* chk = app.add_subcommand("check-sequence", "decide l^r_v -> l^s_u");
  chk->add_option("--u", cs_u, "target weight JSON")->required();
  chk->add_option("--v", cs_v, "source weight JSON")->required();
  chk->add_option("--r", cs_r, "source exponent")->required();
  chk->add_option("--s", cs_s, "target exponent")->required();
  chk->add_flag("--oracle", cs_oracle, "also classify with the truncated oracle");
  chk->add_flag("--pretty", pretty, "indented output");

  std::string vf_family;
  auto* ver = app.add_subcommand("verify-family", "run the golden grid for one family");
  ver->add_option("--family", vf_family, "family id")->required();
  ver->add_flag("--pretty", pretty, "human-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*dec) return cmd_decide(da, pretty);
    if (*ins) return cmd_inspect(ic_family, ic_params, ic_radius, pretty);
    if (*chk) return cmd_check_sequence(cs_u, cs_v, cs_r, cs_s, cs_oracle, pretty);
    if (*ver) return cmd_verify_family(vf_family, pretty);
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidQuery& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const SchemaError& e) {
    std::cerr << "schema: " << e.what() << "\n";
    return kSchema;
  } catch (const InvalidParams& e) {
    std::cerr << "schema: " << e.what() << "\n";
    return kSchema;
  } catch (const json::exception& e) {
    std::cerr << "schema: " << e.what() << "\n";
    return kSchema;
  } catch (const UnsupportedWeight& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kUnsupported;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUnsupported;
  }
  return kUsage;
}
