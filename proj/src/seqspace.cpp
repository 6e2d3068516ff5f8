#include "decomp/seqspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "decomp/covering.hpp"
#include "decomp/errors.hpp"

namespace decomp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double lse(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double m = std::max(a, b);
  return m + std::log2(std::exp2(a - m) + std::exp2(b - m));
}

double log2_bracket(std::int64_t x) { return x == 0 ? 0.0 : std::log2(static_cast<double>(x < 0 ? -x : x)); }

bool zero_vec(const std::vector<Rational>& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x.is_zero(); });
}

const char* sector_name(std::uint8_t s) {
  switch (s) {
    case kAllZ: return "Z";
    case kN0: return "N0";
    case kPos: return "Pos";
    case kNeg: return "Neg";
    case kNonZero: return "NonZero";
    case kZeroPt: return "Zero";
    case kNonPos: return "NonPos";
    default: return "?";
  }
}

std::uint8_t sector_from_name(const std::string& s) {
  if (s == "Z") return kAllZ;
  if (s == "N0") return kN0;
  if (s == "Pos" || s == "N") return kPos;
  if (s == "Neg") return kNeg;
  if (s == "NonZero") return kNonZero;
  if (s == "Zero") return kZeroPt;
  if (s == "NonPos") return kNonPos;
  throw SchemaError("unknown sector '" + s + "'");
}

bool in_sector(std::uint8_t s, std::int64_t x) {
  if (x > 0) return s & kPos;
  if (x < 0) return s & kNeg;
  return s & kZeroPt;
}

}  // namespace

ProductRegion product_region(int dim, std::uint8_t sector) {
  return ProductRegion{std::vector<std::uint8_t>(dim, sector)};
}

std::int64_t cut_bound(const Rational& mu, std::int64_t t) {
  Rational x = mu * Rational(t);
  if (x.sign() <= 0) return 1;
  constexpr std::int64_t kSat = std::int64_t{1} << 61;
  if (x >= Rational(61)) return kSat;
  if (x.is_integer()) return std::int64_t{1} << x.num();
  return static_cast<std::int64_t>(std::ceil(std::exp2(x.to_double())));
}

bool region_contains(const Region& r, const Point& x) {
  if (const auto* p = std::get_if<ProductRegion>(&r)) {
    if (p->sectors.size() != x.size()) return false;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (!in_sector(p->sectors[j], x[j])) return false;
    return true;
  }
  if (std::holds_alternative<PuncturedRegion>(r))
    return std::any_of(x.begin(), x.end(), [](std::int64_t v) { return v != 0; });
  const auto& c = std::get<CutRegion>(r);
  if (x.size() != 2) return false;
  std::int64_t t = x[c.t_coord];
  std::int64_t m = std::abs(x[c.m_coord]);
  if (c.negative_side ? t >= 0 : t < 0) return false;
  std::int64_t lim = cut_bound(c.mu, t) + c.offset;
  return c.inner ? m <= lim : m >= lim;
}

std::string region_str(const Region& r) {
  if (const auto* p = std::get_if<ProductRegion>(&r)) {
    std::string s;
    for (std::size_t j = 0; j < p->sectors.size(); ++j) s += (j ? " x " : "") + std::string(sector_name(p->sectors[j]));
    return s;
  }
  if (std::holds_alternative<PuncturedRegion>(r)) return "Z^d\\{0}";
  const auto& c = std::get<CutRegion>(r);
  std::ostringstream os;
  std::string t = "n" + std::to_string(c.t_coord + 1), m = "n" + std::to_string(c.m_coord + 1);
  os << "{" << t << (c.negative_side ? " < 0" : " >= 0") << ", |" << m << "| " << (c.inner ? "<=" : ">=")
     << " ceil(2^(" << c.mu.str() << "*" << t << "))";
  if (c.offset) os << (c.offset > 0 ? " + " : " - ") << std::abs(c.offset);
  os << "}";
  return os.str();
}

Atom Atom::unit(int dim) {
  Atom a;
  a.exp_pos.assign(dim, Rational(0));
  a.exp_neg.assign(dim, Rational(0));
  a.poly.assign(dim, Rational(0));
  return a;
}

double Atom::log2_at(const Point& x) const {
  double v = log2_coeff;
  double norm2 = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const Rational& a = x[j] >= 0 ? exp_pos[j] : exp_neg[j];
    if (!a.is_zero()) v += a.to_double() * static_cast<double>(x[j]);
    if (!poly[j].is_zero()) v += poly[j].to_double() * log2_bracket(x[j]);
    norm2 += static_cast<double>(x[j]) * static_cast<double>(x[j]);
  }
  if (!radial.is_zero() && norm2 > 1) v += radial.to_double() * 0.5 * std::log2(norm2);
  return v;
}

bool Atom::is_constant() const { return zero_vec(exp_pos) && zero_vec(exp_neg) && zero_vec(poly) && radial.is_zero(); }

ExpPolyWeight::ExpPolyWeight(int dim, std::vector<Piece> pieces) : dim_(dim), pieces_(std::move(pieces)) {
  if (dim_ < 1) throw InvalidParams("weight dimension must be >= 1");
  for (const auto& p : pieces_) {
    if (p.atoms.empty()) throw InvalidParams("weight piece without atoms");
    for (const auto& a : p.atoms)
      if (static_cast<int>(a.exp_pos.size()) != dim_ || static_cast<int>(a.exp_neg.size()) != dim_ ||
          static_cast<int>(a.poly.size()) != dim_)
        throw InvalidParams("atom dimension mismatch");
    if (const auto* pr = std::get_if<ProductRegion>(&p.region))
      if (static_cast<int>(pr->sectors.size()) != dim_) throw InvalidParams("region dimension mismatch");
    if (const auto* c = std::get_if<CutRegion>(&p.region)) {
      if (dim_ != 2 || c->t_coord == c->m_coord || c->t_coord < 0 || c->t_coord > 1 || c->m_coord < 0 ||
          c->m_coord > 1)
        throw InvalidParams("cut regions live on a 2-d lattice");
    }
  }
}

ExpPolyWeight ExpPolyWeight::single(int dim, Region region, Atom atom) {
  return ExpPolyWeight(dim, {Piece{std::move(region), {std::move(atom)}}});
}

ExpPolyWeight ExpPolyWeight::constant(int dim, Region region, double value) {
  Atom a = Atom::unit(dim);
  a.log2_coeff = std::log2(value);
  return single(dim, std::move(region), a);
}

std::vector<Region> ExpPolyWeight::regions() const {
  std::vector<Region> out;
  for (const auto& p : pieces_) out.push_back(p.region);
  return out;
}

bool ExpPolyWeight::is_universal() const {
  if (pieces_.size() != 1) return false;
  const auto* p = std::get_if<ProductRegion>(&pieces_[0].region);
  return p && std::all_of(p->sectors.begin(), p->sectors.end(), [](std::uint8_t s) { return s == kAllZ; });
}

std::optional<std::size_t> ExpPolyWeight::piece_of(const Point& x) const {
  for (std::size_t i = 0; i < pieces_.size(); ++i)
    if (region_contains(pieces_[i].region, x)) return i;
  return std::nullopt;
}

double ExpPolyWeight::log2_at(const Point& x) const {
  auto i = piece_of(x);
  if (!i) throw std::out_of_range("point outside the index set of the weight");
  double v = kNegInf;
  for (const auto& a : pieces_[*i].atoms) v = lse(v, a.log2_at(x));
  return v;
}

namespace {

std::string rat_term(const Rational& r) {
  if (r.is_integer()) return r.str();
  return "(" + r.str() + ")";
}

std::string atom_str(const Atom& a) {
  std::vector<std::string> f;
  if (a.log2_coeff != 0) {
    std::ostringstream os;
    os << std::exp2(a.log2_coeff);
    f.push_back(os.str());
  }
  for (std::size_t j = 0; j < a.poly.size(); ++j) {
    std::string n = "n" + std::to_string(j + 1);
    if (a.exp_pos[j] == a.exp_neg[j]) {
      if (!a.exp_pos[j].is_zero()) f.push_back("2^(" + a.exp_pos[j].str() + "*" + n + ")");
    } else {
      f.push_back("2^(" + a.exp_pos[j].str() + "*" + n + "+ | " + a.exp_neg[j].str() + "*" + n + "-)");
    }
    if (!a.poly[j].is_zero()) f.push_back("<" + n + ">^" + rat_term(a.poly[j]));
  }
  if (!a.radial.is_zero()) f.push_back("|n|^" + rat_term(a.radial));
  if (f.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "*" : "") + f[i];
  return s;
}

Atom combine(const Atom& a, const Atom& b, int sign) {
  Atom c = a;
  Rational sg(sign);
  c.log2_coeff += sign * b.log2_coeff;
  for (std::size_t j = 0; j < c.poly.size(); ++j) {
    c.exp_pos[j] += sg * b.exp_pos[j];
    c.exp_neg[j] += sg * b.exp_neg[j];
    c.poly[j] += sg * b.poly[j];
  }
  c.radial += sg * b.radial;
  return c;
}

template <typename F>
ExpPolyWeight zip(const ExpPolyWeight& a, const ExpPolyWeight& b, F&& f) {
  if (a.dim() != b.dim()) throw UnsupportedWeight("weights of different dimension");
  std::vector<Piece> out;
  if (b.is_universal() && !a.is_universal()) {
    for (const auto& p : a.pieces()) out.push_back(Piece{p.region, f(p.atoms, b.pieces()[0].atoms)});
  } else if (a.is_universal() && !b.is_universal()) {
    for (const auto& p : b.pieces()) out.push_back(Piece{p.region, f(a.pieces()[0].atoms, p.atoms)});
  } else {
    if (a.pieces().size() != b.pieces().size()) throw UnsupportedWeight("weights with unaligned pieces");
    for (std::size_t i = 0; i < a.pieces().size(); ++i) {
      if (!(a.pieces()[i].region == b.pieces()[i].region)) throw UnsupportedWeight("weights with unaligned pieces");
      out.push_back(Piece{a.pieces()[i].region, f(a.pieces()[i].atoms, b.pieces()[i].atoms)});
    }
  }
  return ExpPolyWeight(a.dim(), std::move(out));
}

}  // namespace

std::string ExpPolyWeight::str() const {
  std::string s;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (i) s += "; ";
    s += region_str(pieces_[i].region) + ": ";
    for (std::size_t k = 0; k < pieces_[i].atoms.size(); ++k) s += (k ? " + " : "") + atom_str(pieces_[i].atoms[k]);
  }
  return s;
}

ExpPolyWeight operator*(const ExpPolyWeight& a, const ExpPolyWeight& b) {
  return zip(a, b, [](const std::vector<Atom>& x, const std::vector<Atom>& y) {
    std::vector<Atom> out;
    for (const auto& s : x)
      for (const auto& t : y) out.push_back(combine(s, t, 1));
    return out;
  });
}

ExpPolyWeight operator/(const ExpPolyWeight& a, const ExpPolyWeight& b) {
  return zip(a, b, [](const std::vector<Atom>& x, const std::vector<Atom>& y) {
    if (y.size() != 1) throw UnsupportedWeight("quotient by a sum of atoms");
    std::vector<Atom> out;
    for (const auto& s : x) out.push_back(combine(s, y[0], -1));
    return out;
  });
}

ExpPolyWeight operator+(const ExpPolyWeight& a, const ExpPolyWeight& b) {
  return zip(a, b, [](const std::vector<Atom>& x, const std::vector<Atom>& y) {
    std::vector<Atom> out = x;
    out.insert(out.end(), y.begin(), y.end());
    return out;
  });
}

ExpPolyWeight pow(const ExpPolyWeight& w, const Rational& e) {
  std::vector<Piece> out;
  for (const auto& p : w.pieces()) {
    if (p.atoms.size() != 1) throw UnsupportedWeight("power of a sum of atoms");
    Atom a = p.atoms[0];
    a.log2_coeff *= e.to_double();
    for (std::size_t j = 0; j < a.poly.size(); ++j) {
      a.exp_pos[j] *= e;
      a.exp_neg[j] *= e;
      a.poly[j] *= e;
    }
    a.radial *= e;
    out.push_back(Piece{p.region, {a}});
  }
  return ExpPolyWeight(w.dim(), std::move(out));
}

ExpPolyWeight restrict_to(const ExpPolyWeight& w, const std::vector<std::uint8_t>& sectors) {
  if (static_cast<int>(sectors.size()) != w.dim()) throw InvalidParams("restriction dimension mismatch");
  bool all = std::all_of(sectors.begin(), sectors.end(), [](std::uint8_t s) { return s == kAllZ; });
  std::vector<Piece> out;
  for (const auto& p : w.pieces()) {
    if (all) {
      out.push_back(p);
      continue;
    }
    const auto* pr = std::get_if<ProductRegion>(&p.region);
    if (!pr) throw UnsupportedWeight("restriction of a non-product region");
    ProductRegion r = *pr;
    bool empty = false;
    for (std::size_t j = 0; j < sectors.size(); ++j) {
      r.sectors[j] &= sectors[j];
      empty = empty || r.sectors[j] == 0;
    }
    if (!empty) out.push_back(Piece{r, p.atoms});
  }
  if (out.empty()) throw InvalidParams("restriction leaves an empty index set");
  return ExpPolyWeight(w.dim(), std::move(out));
}

// ---- JSON ----

namespace {

nlohmann::json region_to_json(const Region& r, int dim) {
  if (const auto* p = std::get_if<ProductRegion>(&r)) {
    if (dim == 1) return sector_name(p->sectors[0]);
    nlohmann::json a = nlohmann::json::array();
    for (auto s : p->sectors) a.push_back(sector_name(s));
    return a;
  }
  if (std::holds_alternative<PuncturedRegion>(r)) return "punctured";
  const auto& c = std::get<CutRegion>(r);
  nlohmann::json o;
  o["t"] = c.t_coord;
  o["m"] = c.m_coord;
  o["side"] = c.negative_side ? "neg" : "pos";
  o["mu"] = rational_to_json(c.mu);
  o["kind"] = c.inner ? "inner" : "outer";
  o["offset"] = c.offset;
  return nlohmann::json{{"cut", o}};
}

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> keys, const char* what) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : keys) ok = ok || it.key() == k;
    if (!ok) throw SchemaError(std::string("unknown field '") + it.key() + "' in " + what);
  }
}

Region region_from_json(const nlohmann::json& j, int dim) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "punctured" || s == "Z^d\\0") return PuncturedRegion{};
    return product_region(dim, sector_from_name(s));
  }
  if (j.is_array()) {
    if (static_cast<int>(j.size()) != dim) throw SchemaError("region has wrong number of sectors");
    ProductRegion r;
    for (const auto& s : j) {
      if (!s.is_string()) throw SchemaError("sector names must be strings");
      r.sectors.push_back(sector_from_name(s.get<std::string>()));
    }
    return r;
  }
  if (j.is_object() && j.contains("cut")) {
    reject_unknown(j, {"cut"}, "region");
    const auto& o = j["cut"];
    reject_unknown(o, {"t", "m", "side", "mu", "kind", "offset"}, "cut region");
    CutRegion c;
    c.t_coord = o.value("t", 0);
    c.m_coord = o.value("m", 1);
    std::string side = o.value("side", "pos");
    if (side != "pos" && side != "neg") throw SchemaError("cut side must be 'pos' or 'neg'");
    c.negative_side = side == "neg";
    if (!o.contains("mu")) throw SchemaError("cut region needs 'mu'");
    c.mu = rational_from_json(o["mu"]);
    std::string kind = o.value("kind", "inner");
    if (kind != "inner" && kind != "outer") throw SchemaError("cut kind must be 'inner' or 'outer'");
    c.inner = kind == "inner";
    c.offset = o.value("offset", 0);
    return c;
  }
  throw SchemaError("cannot parse region " + j.dump());
}

std::vector<Rational> rvec(const nlohmann::json& j, int dim, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw SchemaError(std::string("'") + what + "' must be an array of length " + std::to_string(dim));
  std::vector<Rational> v;
  for (const auto& x : j) v.push_back(rational_from_json(x));
  return v;
}

nlohmann::json rvec_json(const std::vector<Rational>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& x : v) a.push_back(rational_to_json(x));
  return a;
}

Atom atom_from_json(const nlohmann::json& j, int dim) {
  if (!j.is_object()) throw SchemaError("atom must be an object");
  reject_unknown(j, {"coeff", "exp", "exp_pos", "exp_neg", "poly", "radial"}, "atom");
  Atom a = Atom::unit(dim);
  if (j.contains("coeff")) {
    if (!j["coeff"].is_number() || j["coeff"].get<double>() <= 0) throw SchemaError("atom coeff must be positive");
    a.log2_coeff = std::log2(j["coeff"].get<double>());
  }
  if (j.contains("exp")) {
    if (j.contains("exp_pos") || j.contains("exp_neg")) throw SchemaError("use either 'exp' or 'exp_pos'/'exp_neg'");
    a.exp_pos = a.exp_neg = rvec(j["exp"], dim, "exp");
  }
  if (j.contains("exp_pos")) a.exp_pos = rvec(j["exp_pos"], dim, "exp_pos");
  if (j.contains("exp_neg")) a.exp_neg = rvec(j["exp_neg"], dim, "exp_neg");
  if (j.contains("poly")) a.poly = rvec(j["poly"], dim, "poly");
  if (j.contains("radial")) a.radial = rational_from_json(j["radial"]);
  return a;
}

int infer_dim(const nlohmann::json& j) {
  if (j.contains("dim")) {
    if (!j["dim"].is_number_integer() || j["dim"].get<int>() < 1) throw SchemaError("'dim' must be a positive integer");
    return j["dim"].get<int>();
  }
  auto from_atoms = [](const nlohmann::json& atoms) -> int {
    if (!atoms.is_array()) return 0;
    for (const auto& a : atoms)
      for (const char* k : {"exp", "exp_pos", "exp_neg", "poly"})
        if (a.is_object() && a.contains(k) && a[k].is_array()) return static_cast<int>(a[k].size());
    return 0;
  };
  auto from_region = [](const nlohmann::json& r) -> int { return r.is_array() ? static_cast<int>(r.size()) : 0; };
  if (j.contains("pieces") && j["pieces"].is_array()) {
    for (const auto& p : j["pieces"]) {
      if (!p.is_object()) continue;
      if (int d = from_atoms(p.value("atoms", nlohmann::json()))) return d;
      if (int d = from_region(p.value("region", nlohmann::json()))) return d;
    }
  }
  if (int d = from_atoms(j.value("atoms", nlohmann::json()))) return d;
  for (const char* k : {"region", "lattice"})
    if (j.contains(k))
      if (int d = from_region(j[k])) return d;
  return 1;
}

Piece piece_from_json(const nlohmann::json& region, const nlohmann::json& atoms, int dim) {
  Piece p{region_from_json(region, dim), {}};
  if (!atoms.is_array() || atoms.empty()) throw SchemaError("'atoms' must be a non-empty array");
  for (const auto& a : atoms) p.atoms.push_back(atom_from_json(a, dim));
  return p;
}

}  // namespace

nlohmann::json weight_to_json(const ExpPolyWeight& w) {
  nlohmann::json pieces = nlohmann::json::array();
  for (const auto& p : w.pieces()) {
    nlohmann::json atoms = nlohmann::json::array();
    for (const auto& a : p.atoms) {
      nlohmann::json o;
      if (a.log2_coeff != 0) o["coeff"] = std::exp2(a.log2_coeff);
      if (a.exp_pos == a.exp_neg) {
        o["exp"] = rvec_json(a.exp_pos);
      } else {
        o["exp_pos"] = rvec_json(a.exp_pos);
        o["exp_neg"] = rvec_json(a.exp_neg);
      }
      if (!zero_vec(a.poly)) o["poly"] = rvec_json(a.poly);
      if (!a.radial.is_zero()) o["radial"] = rational_to_json(a.radial);
      atoms.push_back(o);
    }
    pieces.push_back(nlohmann::json{{"region", region_to_json(p.region, w.dim())}, {"atoms", atoms}});
  }
  return nlohmann::json{{"dim", w.dim()}, {"pieces", pieces}};
}

ExpPolyWeight weight_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("weight must be a JSON object");
  int dim = infer_dim(j);
  std::vector<Piece> pieces;
  if (j.contains("pieces")) {
    reject_unknown(j, {"dim", "pieces"}, "weight");
    if (!j["pieces"].is_array() || j["pieces"].empty()) throw SchemaError("'pieces' must be a non-empty array");
    for (const auto& p : j["pieces"]) {
      if (!p.is_object()) throw SchemaError("piece must be an object");
      reject_unknown(p, {"region", "atoms"}, "piece");
      if (!p.contains("region") || !p.contains("atoms")) throw SchemaError("piece needs 'region' and 'atoms'");
      pieces.push_back(piece_from_json(p["region"], p["atoms"], dim));
    }
  } else {
    reject_unknown(j, {"dim", "region", "lattice", "atoms"}, "weight");
    if (j.contains("region") && j.contains("lattice")) throw SchemaError("use either 'region' or 'lattice'");
    nlohmann::json region = j.contains("region") ? j["region"] : j.value("lattice", nlohmann::json("Z"));
    nlohmann::json atoms = j.value("atoms", nlohmann::json::array({nlohmann::json::object()}));
    pieces.push_back(piece_from_json(region, atoms, dim));
  }
  try {
    return ExpPolyWeight(dim, std::move(pieces));
  } catch (const InvalidParams& e) {
    throw SchemaError(e.what());
  }
}

// ---- exact decision ----

namespace {

// One unbounded direction with growth 2^{rate |n|} |n|^c.
bool side_ok(const Rational& rate, const Rational& c, const Exponent& theta) {
  if (rate.sign() != 0) return rate.sign() < 0;
  if (theta.is_inf()) return c.sign() <= 0;
  return theta.value() * c < Rational(-1);
}

bool radial_member(const Rational& c, int dim, const Exponent& theta) {
  if (theta.is_inf()) return c.sign() <= 0;
  return theta.value() * c < Rational(-dim);
}

bool product_member(const std::vector<std::uint8_t>& sectors, const Atom& a, const Exponent& theta) {
  for (std::size_t j = 0; j < sectors.size(); ++j) {
    if ((sectors[j] & kPos) && !side_ok(a.exp_pos[j], a.poly[j], theta)) return false;
    if ((sectors[j] & kNeg) && !side_ok(-a.exp_neg[j], a.poly[j], theta)) return false;
  }
  return true;
}

bool cut_member(const CutRegion& c, const Atom& a, const Exponent& theta) {
  if (!a.radial.is_zero()) throw UnsupportedWeight("radial factor on a cut region");
  const int t = c.t_coord, m = c.m_coord;
  if (!a.exp_pos[m].is_zero() || !a.exp_neg[m].is_zero())
    throw UnsupportedWeight("exponential factor in the cut coordinate");
  const Rational rho = c.negative_side ? -a.exp_neg[t] : a.exp_pos[t];
  const Rational mu_eff = positive_part(c.negative_side ? -c.mu : c.mu);
  const Rational& cn = a.poly[t];
  const Rational& cm = a.poly[m];
  Rational e, p;
  if (theta.is_inf()) {
    if (c.inner) {
      e = rho + mu_eff * positive_part(cm);
    } else {
      if (cm.sign() > 0) return false;
      e = rho + mu_eff * cm;
    }
    return e.sign() < 0 || (e.is_zero() && cn.sign() <= 0);
  }
  const Rational th = theta.value();
  const Rational x = Rational(1) + th * cm;  // row sum ~ B^x for x > 0, log B for x = 0
  if (c.inner) {
    e = th * rho + mu_eff * positive_part(x);
    p = th * cn + Rational(x.is_zero() && mu_eff.sign() > 0 ? 1 : 0);
  } else {
    if (x.sign() >= 0) return false;
    e = th * rho + mu_eff * x;
    p = th * cn;
  }
  return e.sign() < 0 || (e.is_zero() && p < Rational(-1));
}

bool atom_member(const Region& r, int dim, const Atom& a, const Exponent& theta) {
  const bool plain = zero_vec(a.exp_pos) && zero_vec(a.exp_neg) && zero_vec(a.poly);
  if (const auto* p = std::get_if<ProductRegion>(&r)) {
    if (!a.radial.is_zero()) {
      bool whole = std::all_of(p->sectors.begin(), p->sectors.end(), [](std::uint8_t s) { return s == kAllZ; });
      if (!whole || !plain) throw UnsupportedWeight("radial factor outside a radial lattice");
      return radial_member(a.radial, dim, theta);
    }
    return product_member(p->sectors, a, theta);
  }
  if (std::holds_alternative<PuncturedRegion>(r)) {
    if (!a.radial.is_zero()) {
      if (!plain) throw UnsupportedWeight("radial factor mixed with coordinate factors");
      return radial_member(a.radial, dim, theta);
    }
    return product_member(std::vector<std::uint8_t>(dim, kAllZ), a, theta);
  }
  return cut_member(std::get<CutRegion>(r), a, theta);
}

}  // namespace

Membership decide_lp_membership(const ExpPolyWeight& w, const Exponent& theta) {
  bool member = true;
  // Evaluate every atom so that unsupported atoms always surface.
  for (const auto& p : w.pieces())
    for (const auto& a : p.atoms) member = atom_member(p.region, w.dim(), a, theta) && member;
  return member ? Membership::Member : Membership::NotMember;
}

SequenceDecision decide_sequence_embedding(const ExpPolyWeight& u, const ExpPolyWeight& v, const Exponent& r,
                                           const Exponent& s) {
  SequenceDecision d;
  d.exponent = compound(s, r);
  d.embeds = decide_lp_membership(u / v, d.exponent) == Membership::Member;
  return d;
}

// ---- windows and the oracle ----

void for_each_point(const Region& region, int dim, std::int64_t radius,
                    const std::function<void(const Point&, std::int64_t)>& f) {
  if (const auto* cut = std::get_if<CutRegion>(&region)) {
    Point x(2, 0);
    for (std::int64_t k = 0; k < radius + (cut->negative_side ? 0 : 1); ++k) {
      std::int64_t t = cut->negative_side ? -(k + 1) : k;
      std::int64_t b = cut_bound(cut->mu, t) + cut->offset;
      std::int64_t at = std::abs(t);
      x[cut->t_coord] = t;
      if (cut->inner) {
        if (b < 0 || b > radius) continue;
        std::int64_t level = std::max(at, b);
        for (std::int64_t m = -b; m <= b; ++m) {
          x[cut->m_coord] = m;
          f(x, level);
        }
      } else {
        std::int64_t lo = std::max<std::int64_t>(b, 0);
        for (std::int64_t m = -radius; m <= radius; ++m) {
          if (std::abs(m) < lo) {
            m = lo > 0 ? lo - 1 : m;  // jump over the hole
            continue;
          }
          x[cut->m_coord] = m;
          f(x, std::max(at, std::abs(m)));
        }
      }
    }
    return;
  }
  std::vector<std::uint8_t> sectors(dim, kAllZ);
  const bool punctured = std::holds_alternative<PuncturedRegion>(region);
  if (const auto* p = std::get_if<ProductRegion>(&region)) sectors = p->sectors;
  std::vector<std::vector<std::int64_t>> axis(dim);
  for (int j = 0; j < dim; ++j) {
    for (std::int64_t v = -radius; v <= radius; ++v)
      if (in_sector(sectors[j], v)) axis[j].push_back(v);
    if (axis[j].empty()) return;
  }
  std::vector<std::size_t> pos(dim, 0);
  Point x(dim);
  while (true) {
    std::int64_t level = 0;
    bool origin = true;
    for (int j = 0; j < dim; ++j) {
      x[j] = axis[j][pos[j]];
      level = std::max(level, std::abs(x[j]));
      origin = origin && x[j] == 0;
    }
    if (!(punctured && origin)) f(x, level);
    int j = dim - 1;
    while (j >= 0 && ++pos[j] == axis[j].size()) {
      pos[j] = 0;
      --j;
    }
    if (j < 0) break;
  }
}

std::string tail_kind_str(TailKind k) {
  switch (k) {
    case TailKind::Convergent: return "Convergent";
    case TailKind::Divergent: return "Divergent";
    default: return "Inconclusive";
  }
}

nlohmann::json tail_to_json(const TailClassification& t) {
  auto num = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return v > 0 ? "inf" : "-inf";
  };
  nlohmann::json j;
  j["verdict"] = tail_kind_str(t.kind);
  j["window_radius"] = t.window_radius;
  j["log2_partial"] = num(t.log2_partial);
  if (t.kind == TailKind::Convergent) j["log2_tail_bound"] = num(t.log2_tail);
  j["growth"] = num(t.growth);
  return j;
}

std::vector<std::int64_t> default_schedule(int dim) {
  int top = dim <= 1 ? 14 : dim == 2 ? 8 : dim == 3 ? 5 : 3;
  const double cap = static_cast<double>(window_cap());
  std::vector<std::int64_t> r;
  for (int j = 1; j <= top; ++j) {
    std::int64_t rad = std::int64_t{1} << j;
    if (std::pow(2.0 * rad + 1, dim) > cap && !r.empty()) break;
    r.push_back(rad);
  }
  return r;
}

TailClassification truncated_oracle(const std::vector<Region>& domain, int dim,
                                    const std::function<double(const Point&)>& log2_w, const Exponent& theta,
                                    std::vector<std::int64_t> radii) {
  if (radii.empty()) radii = default_schedule(dim);
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  const bool sup = theta.is_inf();
  const double th = sup ? 1.0 : theta.to_double();
  const std::int64_t rmax = radii.back();

  std::vector<double> level(rmax + 1, kNegInf);
  std::vector<std::uint64_t> count(rmax + 1, 0);
  for (const auto& reg : domain)
    for_each_point(reg, dim, rmax, [&](const Point& x, std::int64_t lv) {
      double v = th * log2_w(x);
      level[lv] = sup ? std::max(level[lv], v) : lse(level[lv], v);
      ++count[lv];
    });

  auto merge = [&](double a, double b) { return sup ? std::max(a, b) : lse(a, b); };
  const std::size_t nj = radii.size();
  std::vector<double> shell(nj, kNegInf), cum(nj, kNegInf);
  std::vector<std::uint64_t> ccount(nj, 0);
  {
    std::int64_t lo = 0;
    double acc = kNegInf;
    std::uint64_t cc = 0;
    for (std::size_t j = 0; j < nj; ++j) {
      for (std::int64_t l = lo; l <= radii[j]; ++l) {
        shell[j] = merge(shell[j], level[l]);
        cc += count[l];
      }
      acc = merge(acc, shell[j]);
      cum[j] = acc;
      ccount[j] = cc;
      lo = radii[j] + 1;
    }
  }

  TailClassification out;
  out.radii = radii;
  out.window_radius = rmax;
  out.log2_shells = shell;
  out.log2_partial = cum.back() / th;
  out.growth = nj >= 2 ? std::exp2((cum[nj - 1] - cum[nj - 2]) / th) : 0;
  if (cum[nj - 1] == kNegInf) out.growth = 1;
  else if (nj >= 2 && cum[nj - 2] == kNegInf) out.growth = std::numeric_limits<double>::infinity();

  if (ccount.back() == 0 || (nj >= 3 && ccount[nj - 1] == ccount[nj - 3])) {
    out.kind = TailKind::Convergent;
    out.log2_tail = kNegInf;
    return out;
  }

  std::vector<std::size_t> ne;
  for (std::size_t j = 0; j < nj; ++j)
    if (shell[j] != kNegInf) ne.push_back(j);
  if (ne.size() < 3) return out;
  const std::size_t a = ne[ne.size() - 3], b = ne[ne.size() - 2], c = ne[ne.size() - 1];
  Eigen::Matrix3d m;
  Eigen::Vector3d y;
  std::size_t idx[3] = {a, b, c};
  for (int i = 0; i < 3; ++i) {
    double rr = static_cast<double>(radii[idx[i]]);
    m(i, 0) = rr;
    m(i, 1) = std::log2(rr);
    m(i, 2) = 1;
    y(i) = shell[idx[i]];
  }
  Eigen::Vector3d fit = m.colPivHouseholderQr().solve(y);
  const double rc = static_cast<double>(radii[c]);
  const double pred = fit(0) * rc + fit(1);  // log2 of the next doubling shell over the last one
  const double obs = shell[c] - shell[b];
  const double prev = shell[b] - shell[a];
  const double log_growth = cum[nj - 1] - cum[nj - 2];
  const double l09 = std::log2(0.9);

  bool blowup = log_growth >= std::log2(1.5) || (cum[nj - 1] / th > std::log2(1e12) && log_growth >= std::log2(1.01));
  if (blowup && obs >= 0 && pred >= 0) {
    out.kind = TailKind::Divergent;
    return out;
  }
  if (sup) {
    if (obs <= 0 && prev <= 0 && pred <= 0) {
      out.kind = TailKind::Convergent;
      out.log2_tail = kNegInf;
    }
    return out;
  }
  if (obs <= l09 && prev <= l09 && pred <= l09) {
    out.kind = TailKind::Convergent;
    double rho = std::max(obs, pred);
    double tail = shell[c] + rho - std::log2(1 - std::exp2(rho));
    if (rmax >= 2) {
      double q1 = level[rmax] - level[rmax - 1], q2 = level[rmax - 1] - level[rmax - 2];
      if (std::isfinite(q1) && std::isfinite(q2) && q1 <= l09 && q2 <= l09) {
        double q = std::max(q1, q2);
        tail = std::min(tail, level[rmax] + q - std::log2(1 - std::exp2(q)));
      }
    }
    out.log2_tail = tail / th;
  }
  return out;
}

TailClassification truncated_oracle(const ExpPolyWeight& w, const Exponent& theta, std::vector<std::int64_t> radii) {
  return truncated_oracle(w.regions(), w.dim(), [&](const Point& x) { return w.log2_at(x); }, theta,
                          std::move(radii));
}

std::vector<WindowPoint> window_points(const ExpPolyWeight& u, const ExpPolyWeight& v, std::int64_t radius) {
  std::vector<WindowPoint> out;
  for (const auto& reg : u.regions())
    for_each_point(reg, u.dim(), radius,
                   [&](const Point& x, std::int64_t) { out.push_back(WindowPoint{x, u.log2_at(x), v.log2_at(x)}); });
  return out;
}

double log2_quotient_norm(const std::vector<WindowPoint>& pts, const Exponent& r, const Exponent& s) {
  Exponent t = compound(s, r);
  double acc = kNegInf;
  if (t.is_inf()) {
    for (const auto& p : pts) acc = std::max(acc, p.log2_u - p.log2_v);
    return acc;
  }
  double tv = t.to_double();
  for (const auto& p : pts) acc = lse(acc, tv * (p.log2_u - p.log2_v));
  return acc / tv;
}

double log2_weighted_norm(const std::vector<double>& log2_c, const std::vector<double>& log2_w, const Exponent& e) {
  double acc = kNegInf;
  if (e.is_inf()) {
    for (std::size_t i = 0; i < log2_c.size(); ++i)
      if (log2_c[i] != kNegInf) acc = std::max(acc, log2_c[i] + log2_w[i]);
    return acc;
  }
  double ev = e.to_double();
  for (std::size_t i = 0; i < log2_c.size(); ++i)
    if (log2_c[i] != kNegInf) acc = lse(acc, ev * (log2_c[i] + log2_w[i]));
  return acc / ev;
}

std::vector<double> witness_sequence(const std::vector<WindowPoint>& pts, const Exponent& r, const Exponent& s) {
  Exponent t = compound(s, r);
  std::vector<double> c(pts.size(), kNegInf);
  if (pts.empty()) return c;
  if (t.is_inf()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < pts.size(); ++i)
      if (pts[i].log2_u - pts[i].log2_v > pts[best].log2_u - pts[best].log2_v) best = i;
    c[best] = -pts[best].log2_u;
    return c;
  }
  const double beta = t.to_double() / s.to_double();
  for (std::size_t i = 0; i < pts.size(); ++i) c[i] = beta * (pts[i].log2_u - pts[i].log2_v) - pts[i].log2_u;
  return c;
}

}  // namespace decomp
