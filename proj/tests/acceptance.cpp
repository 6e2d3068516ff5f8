// One pass/fail line per acceptance criterion.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "decomp/covering.hpp"
#include "decomp/embedding.hpp"
#include "decomp/exponent.hpp"
#include "decomp/families.hpp"
#include "decomp/grid.hpp"
#include "decomp/seqspace.hpp"

using namespace decomp;
using nlohmann::json;

namespace {

struct Result {
  bool pass = false;
  std::string detail;
};

Exponent E(const std::string& s) { return parse_exponent(s); }

const std::vector<Exponent>& grid_ex() {
  static const std::vector<Exponent> v{E("1/2"), E("1"), E("3/2"), E("2"), E("3"), Exponent::inf()};
  return v;
}

Rational pos_part(const Rational& x) { return x < Rational(0) ? Rational(0) : x; }

Result exponent_identities() {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::int64_t> num(1, 400), den(1, 60);
  auto draw = [&]() { return rng() % 20 == 0 ? Exponent::inf() : Exponent(Rational(num(rng), den(rng))); };
  std::size_t fails = 0, n = 10000;
  for (std::size_t i = 0; i < n; ++i) {
    Exponent p = draw(), s = draw(), r = draw();
    if (!(p < Exponent(1)) && !(conjugate(conjugate(p)) == p)) ++fails;
    if (Exponent(2) < lower_conjugate(p)) ++fails;
    Exponent c = compound(s, r);
    if (!(c.reciprocal() == pos_part(s.reciprocal() - r.reciprocal()))) ++fails;
    if (c.is_inf() != !(s < r)) ++fails;
  }
  std::ostringstream os;
  os << n << " draws, " << fails << " failures";
  return {fails == 0, os.str()};
}

// Hoelder direction on Embeds and witness growth on DoesNotEmbed.
Result sequence_embeddings() {
  std::mt19937_64 rng(12345);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::size_t embeds = 0, holder_fail = 0, not_embeds = 0, witness_fail = 0;
  std::ostringstream fails;
  for (int it = 0; it < 200; ++it) {
    int dim = pick(1, 2);
    std::vector<std::uint8_t> sec;
    for (int j = 0; j < dim; ++j) sec.push_back(std::vector<std::uint8_t>{kAllZ, kN0, kNonZero}[pick(0, 2)]);
    Region reg = ProductRegion{sec};
    auto atom = [&]() {
      Atom a = Atom::unit(dim);
      for (int j = 0; j < dim; ++j) {
        a.exp_pos[j] = Rational(pick(-4, 4), 4);
        a.exp_neg[j] = Rational(pick(-4, 4), 4);
        a.poly[j] = Rational(pick(-4, 4), 4);
      }
      return a;
    };
    std::vector<Atom> ua{atom()};
    if (pick(0, 1)) ua.push_back(atom());
    ExpPolyWeight u(dim, {Piece{reg, ua}});
    ExpPolyWeight v = ExpPolyWeight::single(dim, reg, atom());
    Exponent r = grid_ex()[pick(0, 5)], s = grid_ex()[pick(0, 5)];
    auto d = decide_sequence_embedding(u, v, r, s);
    if (d.embeds) {
      ++embeds;
      auto pts = window_points(u, v, 8);
      double c = log2_quotient_norm(pts, r, s);
      std::vector<double> lu, lv;
      for (const auto& p : pts) {
        lu.push_back(p.log2_u);
        lv.push_back(p.log2_v);
      }
      for (int k = 0; k < 20; ++k) {
        std::vector<double> x;
        for (std::size_t i = 0; i < pts.size(); ++i)
          x.push_back(pick(0, 3) == 0 ? -INFINITY : std::uniform_real_distribution<double>(-5, 5)(rng));
        if (log2_weighted_norm(x, lu, s) > c + log2_weighted_norm(x, lv, r) + std::log2(1 + 1e-9)) {
          ++holder_fail;
          break;
        }
      }
      continue;
    }
    ++not_embeds;
    std::vector<double> ratio;
    for (int radius : {4, 8, 16}) {
      auto pts = window_points(u, v, radius);
      auto x = witness_sequence(pts, r, s);
      std::vector<double> lu, lv;
      for (const auto& p : pts) {
        lu.push_back(p.log2_u);
        lv.push_back(p.log2_v);
      }
      ratio.push_back(log2_weighted_norm(x, lu, s) - log2_weighted_norm(x, lv, r));
    }
    double g1 = std::exp2(ratio[1] - ratio[0]), g2 = std::exp2(ratio[2] - ratio[1]);
    if (d.exponent.is_inf()) {
      // sup-type divergence: unbounded quotient, seen on a larger window
      double m16 = -INFINITY, big = -INFINITY;
      for (const auto& p : window_points(u, v, 16)) m16 = std::max(m16, p.log2_u - p.log2_v);
      for (const auto& p : window_points(u, v, dim == 1 ? 16384 : 256)) big = std::max(big, p.log2_u - p.log2_v);
      if (big - m16 >= std::log2(1.2)) continue;
    }
    if (g1 < 1.2 || g2 < 1.2) {
      ++witness_fail;
      fails << " [" << (u / v).str() << ", t=" << d.exponent.str() << ", growth " << g1 << "/" << g2 << "]";
    }
  }
  std::ostringstream os;
  os << embeds << " embeds (" << holder_fail << " inequality violations), " << not_embeds << " non-embeddings ("
     << witness_fail << " with witness growth < 1.2 per doubling)" << fails.str();
  return {holder_fail == 0 && witness_fail == 0, os.str()};
}

Result golden_grid() {
  std::ostringstream os;
  bool ok = true;
  for (auto id : all_families()) {
    auto g = run_golden_grid(id);
    os << family_name(id) << " " << g.agree << "/" << g.queries << "; ";
    if (g.agree != g.queries || g.errors) {
      ok = false;
      for (const auto& f : g.first_failures) os << "(" << f << ") ";
    }
  }
  DecideOptions refine{.refine = true};
  std::size_t spots = 0, spot_fail = 0;
  auto spot = [&](bool good, const std::string& what) {
    ++spots;
    if (!good) {
      ++spot_fail;
      os << "spot fail: " << what << "; ";
    }
  };
  for (int k : {1, 2})
    for (const char* s : {"-1", "0", "1", "5/2"})
      for (const auto& p : grid_ex())
        for (const auto& q : grid_ex()) {
          auto hb = instantiate("hom_besov", {{"d", 2}, {"s", s}});
          spot(decide_sobolev(hb, p, Exponent(1), k, q, refine).outcome == Outcome::DoesNotEmbed, "hom k>=1");
        }
  for (int d : {1, 2, 3})
    for (int k : {0, 1, 2})
      for (const auto& p : grid_ex())
        for (const auto& q : grid_ex()) {
          if (q < p) continue;
          auto f = instantiate("inhom_besov", {{"d", d}});
          Rational th = smoothness_threshold(f, p, Exponent(1), k, q);
          auto at = instantiate("inhom_besov", {{"d", d}, {"s", rational_to_json(th)}});
          bool mid = !q.is_inf() && Exponent(2) < q;
          Exponent cut = mid ? Exponent(2) : lower_conjugate(q);
          for (const auto& r : grid_ex()) {
            auto v = decide_sobolev(at, p, r, k, q, refine).outcome;
            // the refinement leaves r in (2, q] open at equality when p < q
            bool gap = mid && Exponent(2) < r && r <= q && p < q;
            Outcome above = gap ? Outcome::Undetermined : Outcome::DoesNotEmbed;
            spot(v == (r <= cut ? Outcome::Embeds : above), "inhom threshold");
          }
        }
  // BV solvability over alpha for the shearlet coorbit family, c = 1/2
  for (const char* rs : {"1/2", "1", "3/2", "2", "3", "inf"}) {
    Exponent r = E(rs);
    Rational th = r <= Exponent(1) ? Rational(2) : Rational(3) - r.reciprocal();
    bool strict = Exponent(1) < r;
    for (Rational off : {Rational(-1, 4), Rational(0), Rational(1, 4), Rational(1)}) {
      Rational beta = th + off;
      bool expect = strict ? off > Rational(0) : off >= Rational(0);
      bool any = false;
      for (int a = -480; a <= 1440 && !any; ++a) {
        auto f = instantiate("shearlet_coorbit",
                             {{"c", "1/2"}, {"alpha", rational_to_json(Rational(a, 240))}, {"beta", rational_to_json(beta)}});
        any = decide_bv(f, Exponent(1), r, 1, refine).outcome == Outcome::Embeds;
      }
      spot(any == expect, std::string("shearlet BV r=") + rs + " beta=" + beta.str());
    }
  }
  os << spots - spot_fail << "/" << spots << " spot fixtures";
  return {ok && spot_fail == 0, os.str()};
}

Result oracle_vs_symbolic() {
  std::mt19937_64 rng(777);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::size_t n = 0, contra = 0, classified = 0, unsupported = 0;
  for (int it = 0; it < 500; ++it) {
    int kind = pick(0, 3);  // 1-d product, 2-d product, punctured, cut
    int dim = kind == 0 ? 1 : kind == 2 ? pick(1, 2) : 2;
    Region reg;
    if (kind == 0) {
      reg = ProductRegion{{std::vector<std::uint8_t>{kAllZ, kN0, kNonZero, kNeg}[pick(0, 3)]}};
    } else if (kind == 1) {
      const std::vector<std::uint8_t> s{kAllZ, kN0, kNonZero, kZeroPt};
      reg = ProductRegion{{s[pick(0, 3)], s[pick(0, 3)]}};
    } else if (kind == 2) {
      reg = PuncturedRegion{};
    } else {
      CutRegion c;
      c.negative_side = pick(0, 1);
      c.mu = Rational(pick(-4, 4), 2);
      c.inner = pick(0, 1);
      c.offset = pick(-1, 1);
      reg = c;
    }
    auto atom = [&]() {
      Atom a = Atom::unit(dim);
      for (int j = 0; j < dim && kind != 2; ++j) {
        if (!(kind == 3 && j == 1)) {
          a.exp_pos[j] = Rational(pick(-4, 4), 4);
          a.exp_neg[j] = Rational(pick(-4, 4), 4);
        }
        a.poly[j] = Rational(pick(-4, 4), 4);
      }
      if (kind == 2) a.radial = Rational(pick(-12, 4), 4);
      return a;
    };
    std::vector<Atom> atoms{atom()};
    if (pick(0, 2) == 0) atoms.push_back(atom());
    ExpPolyWeight w(dim, {Piece{reg, atoms}});
    Exponent th = grid_ex()[pick(0, 5)];
    Membership m;
    try {
      m = decide_lp_membership(w, th);
    } catch (const std::exception&) {
      ++unsupported;
      continue;
    }
    ++n;
    auto t = truncated_oracle(w, th);
    bool member = m == Membership::Member;
    if ((member && t.kind == TailKind::Divergent) || (!member && t.kind == TailKind::Convergent)) ++contra;
    if (t.kind != TailKind::Inconclusive) ++classified;
  }
  double rate = n ? static_cast<double>(classified) / static_cast<double>(n) : 0;
  std::ostringstream os;
  os << n << " weights, " << contra << " contradictions, " << classified << " classified (" << 100 * rate << "%)";
  if (unsupported) os << ", " << unsupported << " unsupported";
  return {contra == 0 && rate >= 0.9 && n == 500, os.str()};
}

Result covering_certification() {
  std::ostringstream os;
  bool ok = true;
  auto hb = instantiate("hom_besov", {{"d", 1}});
  auto h8 = neighbors(hb.covering, enumerate_window(hb.covering, 8));
  auto h9 = neighbors(hb.covering, enumerate_window(hb.covering, 9));
  ok = ok && h8.n_hat <= 9 && h8.n_hat == h9.n_hat;
  os << "hom N_hat " << h8.n_hat << "/" << h9.n_hat;

  auto ib = instantiate("inhom_besov", {{"d", 1}});
  std::size_t zero[2];
  double chat[2];
  for (int i = 0; i < 2; ++i) {
    auto w = enumerate_window(ib.covering, 8 + i);
    auto nb = neighbors(ib.covering, w);
    auto cert = certify_constants(ib.covering, w, nb);
    zero[i] = nb.adjacency[0].size();
    chat[i] = cert.c_hat;
    for (auto j : nb.adjacency[0]) ok = ok && nb.window[j][0] <= 3;
  }
  ok = ok && zero[0] <= 4 && zero[0] == zero[1] && chat[0] <= 16 && chat[0] == chat[1];
  os << "; inhom |0*| " << zero[0] << "/" << zero[1] << ", C_hat " << chat[0] << "/" << chat[1];

  for (double c : {-1.0, 0.5, 1.0, 2.0}) {
    auto co = instantiate("shearlet_coorbit", {{"c", c}});
    double lo[2], hi[2];
    for (int i = 0; i < 2; ++i) {
      lo[i] = INFINITY;
      hi[i] = 0;
      for (const auto& e : enumerate_window(co.covering, 8 + i)) {
        double n = static_cast<double>(e.index[0]), m = static_cast<double>(e.index[1]);
        if (std::fabs(n) > 8) continue;
        double ratio = spectral_norm(e.T) / (std::exp2(n) + std::exp2(n * c) + std::exp2(n * c) * std::fabs(m));
        lo[i] = std::min(lo[i], ratio);
        hi[i] = std::max(hi[i], ratio);
      }
    }
    ok = ok && lo[0] >= 0.25 && hi[0] <= 4 && lo[1] >= 0.25 && hi[1] <= 4;
    os << "; coorbit c=" << c << " ratio [" << lo[0] << ", " << hi[0] << "]/[" << lo[1] << ", " << hi[1] << "]";
  }
  return {ok, os.str()};
}

json random_params(FamilyId id, std::mt19937_64& rng) {
  auto q = [&](int lo, int hi) { return rational_to_json(Rational(std::uniform_int_distribution<int>(lo, hi)(rng), 4)); };
  int d = 1 + static_cast<int>(rng() % 3);
  switch (id) {
    case FamilyId::HomBesov:
    case FamilyId::InhomBesov: return {{"d", d}, {"s", q(-8, 24)}};
    case FamilyId::AlphaModulation: return {{"d", 1 + d % 2}, {"alpha", q(0, 3)}, {"gamma", q(-8, 24)}};
    case FamilyId::ShearletSmoothness: return {{"beta", q(-8, 24)}};
    case FamilyId::ShearletCoorbit:
      return {{"c", std::vector<double>{-1, 0.5, 1, 2}[rng() % 4]}, {"alpha", q(-8, 24)}, {"beta", q(-8, 24)}};
    default: {
      json a = json::array(), b = json::array();
      for (int l = 0; l < 1 + d % 2; ++l) {
        a.push_back(q(-8, 16));
        b.push_back(q(-8, 16));
      }
      return {{"d", 1 + d % 2}, {"alpha", a}, {"beta", b}};
    }
  }
}

bool contradictory(const Verdict& v) {
  bool suff = false, nec_false = false;
  for (const auto& e : v.evidence) {
    if ((e.id.rfind("suff:", 0) == 0 || e.id.rfind("alt:", 0) == 0) && e.holds && v.outcome == Outcome::Embeds)
      suff = true;
    if (e.id.rfind("nec:", 0) == 0 && !e.holds) nec_false = true;
  }
  return suff && nec_false;
}

Result structural_equalities() {
  std::mt19937_64 rng(6);
  const std::vector<Exponent> qs{E("1/2"), E("1"), E("3/2"), E("2"), Exponent::inf()};
  std::size_t n = 10000, bv_mis = 0, cb_mis = 0, undetermined = 0, contra = 0, errors = 0;
  for (std::size_t i = 0; i < n; ++i) {
    FamilyId id = all_families()[rng() % all_families().size()];
    auto f = instantiate(family_name(id), random_params(id, rng));
    Exponent p = grid_ex()[rng() % 6], r = grid_ex()[rng() % 6], q = qs[rng() % qs.size()];
    int k = static_cast<int>(rng() % 3);
    try {
      auto cb = decide_cb(f, p, r, k);
      auto sinf = decide_sobolev(f, p, r, k, Exponent::inf());
      if (cb.outcome != sinf.outcome) ++cb_mis;
      if (k >= 1) {
        auto bv = decide_bv(f, p, r, k);
        auto s1 = decide_sobolev(f, p, r, k, Exponent(1));
        if (bv.outcome != s1.outcome) ++bv_mis;
      }
      auto v = decide_sobolev(f, p, r, k, q);
      if (v.outcome == Outcome::Undetermined) ++undetermined;
      if (contradictory(v) || contradictory(cb) || contradictory(sinf)) ++contra;
    } catch (const std::logic_error&) {
      ++contra;
    } catch (const std::exception&) {
      ++errors;
    }
  }
  std::ostringstream os;
  os << n << " queries: " << bv_mis << " BV mismatches, " << cb_mis << " Cb mismatches, " << undetermined
     << " undetermined with q in (0,2] or inf, " << contra << " contradictions, " << errors << " errors";
  return {bv_mis == 0 && cb_mis == 0 && undetermined == 0 && contra == 0 && errors == 0, os.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Result cli_goldens() {
  std::ifstream cases(std::string(GOLDEN_DIR) + "/cases.txt");
  std::string line;
  std::size_t n = 0, bad = 0;
  std::ostringstream os;
  while (std::getline(cases, line)) {
    if (line.empty()) continue;
    auto tab = line.find('\t');
    std::string name = line.substr(0, tab), args = line.substr(tab + 1);
    std::string cmd = std::string("'") + DECOMP_CLI + "' " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    int status = pclose(pipe);
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::string base = std::string(GOLDEN_DIR) + "/" + name;
    int want = std::stoi(slurp(base + ".exit"));
    ++n;
    if (code != want || out != slurp(base + ".stdout")) {
      ++bad;
      os << " " << name << "(exit " << code << ")";
    }
  }
  std::ostringstream head;
  head << n << " invocations, " << bad << " mismatches" << os.str();
  return {n == 12 && bad == 0, head.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Result()>>> criteria{
      {"exponent identities", exponent_identities},
      {"sequence embeddings on windows", sequence_embeddings},
      {"golden grid", golden_grid},
      {"symbolic vs oracle", oracle_vs_symbolic},
      {"covering certification", covering_certification},
      {"structural equalities", structural_equalities},
      {"cli goldens", cli_goldens},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    if (!r.pass) ++failed;
    std::cout << "criterion " << i + 1 << " " << (r.pass ? "PASS" : "FAIL") << " " << criteria[i].first << ": "
              << r.detail << std::endl;
  }
  return failed ? 1 : 0;
}
