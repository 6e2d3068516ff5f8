#include "decomp/families.hpp"

#include <cmath>
#include <sstream>

#include "decomp/errors.hpp"

namespace decomp {

namespace {

using nlohmann::json;

Mat scalar_mat(int d, double v) { return Mat::Identity(d, d) * v; }
Vec zero_vec(int d) { return Vec::Zero(d); }
Vec e1(int d, double v) {
  Vec x = Vec::Zero(d);
  x(0) = v;
  return x;
}

Atom atom(int dim) { return Atom::unit(dim); }

Atom exp_atom(int dim, int coord, const Rational& rate) {
  Atom a = Atom::unit(dim);
  a.exp_pos[coord] = rate;
  a.exp_neg[coord] = rate;
  return a;
}

ExpPolyWeight one_piece(int dim, Region region, std::vector<Atom> atoms) {
  return ExpPolyWeight(dim, {Piece{std::move(region), std::move(atoms)}});
}

// 1 + |b|^k + ||T||^k with b = 0: 3 (k = 0) or {1, A^k}
std::vector<Atom> growth_atoms(int dim, const Atom& norm_atom, int k, bool with_one) {
  if (k == 0) {
    Atom c = Atom::unit(dim);
    c.log2_coeff = std::log2(with_one ? 3.0 : 2.0);
    return {c};
  }
  Atom a = norm_atom;
  for (auto& x : a.exp_pos) x *= k;
  for (auto& x : a.exp_neg) x *= k;
  for (auto& x : a.poly) x *= k;
  a.radial *= k;
  a.log2_coeff *= k;
  if (with_one) return {Atom::unit(dim), a};
  return {a};
}

void require_keys(const json& j, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw SchemaError("params must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (auto* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw SchemaError("unknown parameter '" + it.key() + "'");
  }
}

// Weight parameters default to 0 so that geometry-only calls need no params.
Rational need(const json& j, const char* key, Rational fallback = 0) {
  if (!j.contains(key)) return fallback;
  try {
    return rational_from_json(j.at(key));
  } catch (const SchemaError&) {
    throw;
  } catch (const std::exception& e) {
    throw SchemaError(std::string("parameter '") + key + "': " + e.what());
  }
}

int dim_param(const json& j, int fallback) {
  if (!j.contains("d")) return fallback;
  if (!j["d"].is_number_integer()) throw SchemaError("parameter 'd' must be an integer");
  if (j["d"].get<int>() < 1 || j["d"].get<int>() > 8) throw InvalidParams("parameter 'd' must lie in [1, 8]");
  return j["d"].get<int>();
}

// s >= T when nonstrict, s > T otherwise
bool meets(const Rational& s, const Rational& t, bool nonstrict) { return nonstrict ? s >= t : s > t; }

Rational diff(const Exponent& p, const Exponent& q) { return p.reciprocal() - q.reciprocal(); }

// (1/Q - 1/r)_+
Rational excess(const Exponent& big_q, const Exponent& r) { return compound(big_q, r).reciprocal(); }

bool in_open_2_inf(const Exponent& q) { return q > Exponent(2) && !q.is_inf(); }

// ------------------------------------------------------------------ families

FamilySpec hom_besov(const FamilyParams& prm) {
  FamilySpec f;
  int d = prm.d;
  f.covering.name = "hom_besov";
  f.covering.dimension = d;
  f.covering.indices = integer_line();
  f.covering.generate = [d](const Index& i) {
    return Element{i, scalar_mat(d, std::exp2(static_cast<double>(i[0]))), zero_vec(d), Annulus{0.25, 4.0}};
  };
  f.covering.base_radius = 4;
  f.covering.tightness = TightnessWitness{1.0, [d](const Index&) { return e1(d, 2.0); }};
  f.covering.analytic_neighbors = [](const Index& i) {
    std::vector<Index> out;
    for (std::int64_t n = i[0] - 4; n <= i[0] + 4; ++n) out.push_back({n});
    return out;
  };
  Region z = product_region(1);
  f.geometry.lattice_dim = 1;
  f.geometry.to_lattice = [](const Index& i) { return std::optional<Point>(Point{i[0]}); };
  f.geometry.from_lattice = [](const Point& x) { return Index{x[0]}; };
  f.geometry.abs_det = ExpPolyWeight::single(1, z, exp_atom(1, 0, d));
  f.geometry.growth = [z](int k, bool with_one) {
    return one_piece(1, z, growth_atoms(1, exp_atom(1, 0, 1), k, with_one));
  };
  f.geometry.growth_range = [](int, bool) { return std::make_pair(1.0, 1.0); };
  Rational s = prm.s;
  f.space_symbolic = [z, s](const Exponent&) { return ExpPolyWeight::single(1, z, exp_atom(1, 0, s)); };
  f.log2_space = [s](const Index& i, const Exponent&) { return s.to_double() * static_cast<double>(i[0]); };
  f.space_range = [](const Exponent&) { return std::make_pair(1.0, 1.0); };
  f.default_I0 = std::vector<std::uint8_t>{kN0};
  f.moderate_note = "u_n = 2^{sn}, neighbours within |n - m| <= 3";
  return f;
}

FamilySpec inhom_besov(const FamilyParams& prm) {
  FamilySpec f;
  int d = prm.d;
  f.covering.name = "inhom_besov";
  f.covering.dimension = d;
  f.covering.indices = natural_line();
  f.covering.generate = [d](const Index& i) {
    if (i[0] == 0) return Element{i, Mat::Identity(d, d), zero_vec(d), Ball{zero_vec(d), 2.0}};
    return Element{i, scalar_mat(d, std::exp2(static_cast<double>(i[0]))), zero_vec(d), Annulus{0.25, 4.0}};
  };
  f.covering.base_radius = 4;
  f.covering.tightness = TightnessWitness{1.0, [d](const Index& i) { return i[0] == 0 ? zero_vec(d) : e1(d, 2.0); }};
  f.covering.analytic_neighbors = [](const Index& i) {
    std::vector<Index> out;
    if (i[0] > 4) out.push_back({0});
    for (std::int64_t n = std::max<std::int64_t>(0, i[0] - 4); n <= i[0] + 4; ++n) out.push_back({n});
    return out;
  };
  Region n0 = product_region(1, kN0);
  f.geometry.lattice_dim = 1;
  f.geometry.to_lattice = [](const Index& i) { return std::optional<Point>(Point{i[0]}); };
  f.geometry.from_lattice = [](const Point& x) { return Index{x[0]}; };
  f.geometry.abs_det = ExpPolyWeight::single(1, n0, exp_atom(1, 0, d));
  f.geometry.growth = [n0](int k, bool with_one) {
    return one_piece(1, n0, growth_atoms(1, exp_atom(1, 0, 1), k, with_one));
  };
  f.geometry.growth_range = [](int, bool) { return std::make_pair(1.0, 1.0); };
  Rational s = prm.s;
  f.space_symbolic = [n0, s](const Exponent&) { return ExpPolyWeight::single(1, n0, exp_atom(1, 0, s)); };
  f.log2_space = [s](const Index& i, const Exponent&) { return s.to_double() * static_cast<double>(i[0]); };
  f.space_range = [](const Exponent&) { return std::make_pair(1.0, 1.0); };
  f.default_I0 = std::vector<std::uint8_t>{kAllZ};
  f.moderate_note = "u_n = 2^{sn}, neighbours within |n - m| <= 3 plus n = 0";
  return f;
}

FamilySpec alpha_modulation(const FamilyParams& prm) {
  FamilySpec f;
  int d = prm.d;
  Rational a0 = prm.alpha / (Rational(1) - prm.alpha);
  double a0d = a0.to_double();
  double rho = prm.rho->to_double();
  f.covering.name = "alpha_modulation";
  f.covering.dimension = d;
  f.covering.indices = punctured_lattice(d);
  f.covering.generate = [d, a0d, rho](const Index& i) {
    Vec k(d);
    for (int j = 0; j < d; ++j) k(j) = static_cast<double>(i[j]);
    double sc = std::pow(k.norm(), a0d);
    return Element{i, scalar_mat(d, sc), sc * k, Ball{zero_vec(d), rho}};
  };
  f.covering.base_radius = rho;
  f.covering.tightness = TightnessWitness{rho / 2, [d](const Index&) { return zero_vec(d); }};
  Region punct = PuncturedRegion{};
  f.geometry.lattice_dim = d;
  f.geometry.to_lattice = [](const Index& i) { return std::optional<Point>(Point(i.begin(), i.end())); };
  f.geometry.from_lattice = [](const Point& x) { return Index(x.begin(), x.end()); };
  Atom det = atom(d);
  det.radial = Rational(d) * a0;
  f.geometry.abs_det = ExpPolyWeight::single(d, punct, det);
  f.geometry.growth = [d, punct, a0](int k, bool with_one) {
    if (k == 0) return one_piece(d, punct, growth_atoms(d, atom(d), 0, with_one));
    Atom b = atom(d), t = atom(d);
    b.radial = Rational(k) * (a0 + 1);
    t.radial = Rational(k) * a0;
    std::vector<Atom> atoms{b, t};
    if (with_one) atoms.insert(atoms.begin(), atom(d));
    return one_piece(d, punct, atoms);
  };
  f.geometry.growth_range = [](int, bool) { return std::make_pair(1.0, 1.0); };
  Rational g = prm.gamma / (Rational(1) - prm.alpha);
  f.space_symbolic = [d, punct, g](const Exponent&) {
    Atom u = atom(d);
    u.radial = g;
    return ExpPolyWeight::single(d, punct, u);
  };
  f.log2_space = [g](const Index& i, const Exponent&) {
    double s = 0;
    for (auto v : i) s += static_cast<double>(v) * static_cast<double>(v);
    return g.to_double() * 0.5 * std::log2(s);
  };
  f.space_range = [](const Exponent&) { return std::make_pair(1.0, 1.0); };
  f.default_I0 = std::vector<std::uint8_t>(d, kAllZ);
  f.moderate_note = "u_k = |k|^{gamma/(1-alpha)}, radial power weight";
  return f;
}

FamilySpec shearlet_smoothness(const FamilyParams& prm) {
  FamilySpec f;
  f.covering.name = "shearlet_smoothness";
  f.covering.dimension = 2;
  f.covering.indices = shearlet_cone_indices();
  ConeSection cone{1.0 / 3, 3.0, -1.0, 1.0};
  f.covering.generate = [cone](const Index& i) {
    if (i == kShearletLow) {
      Vec b(2);
      b << -4, 0;
      return Element{i, scalar_mat(2, 4.0), b, cone};
    }
    double n = static_cast<double>(i[0]);
    double m = static_cast<double>(i[1]);
    Mat t(2, 2);
    t << std::exp2(2 * n), 0, std::exp2(n) * m, std::exp2(n);
    if (i[3] == 1) t.row(0).swap(t.row(1));
    t *= static_cast<double>(i[2]);
    return Element{i, t, zero_vec(2), cone};
  };
  f.covering.base_radius = 3 * std::sqrt(2.0);
  f.covering.tightness = TightnessWitness{0.5, [](const Index&) { return e1(2, 1.0); }};
  CutRegion cut{0, 1, false, Rational(1), true, 0};
  Region reg = cut;
  f.geometry.lattice_dim = 2;
  f.geometry.to_lattice = [](const Index& i) {
    if (i == kShearletLow) return std::optional<Point>();
    return std::optional<Point>(Point{i[0], i[1]});
  };
  f.geometry.from_lattice = [](const Point& x) { return Index{x[0], x[1], 1, 0}; };
  f.geometry.abs_det = ExpPolyWeight::single(2, reg, exp_atom(2, 0, 3));
  f.geometry.growth = [reg](int k, bool with_one) {
    return one_piece(2, reg, growth_atoms(2, exp_atom(2, 0, 2), k, with_one));
  };
  f.geometry.growth_range = [](int k, bool) { return std::make_pair(1.0, std::pow(3.0, k / 2.0)); };
  Rational beta = prm.beta;
  f.space_symbolic = [reg, beta](const Exponent&) { return ExpPolyWeight::single(2, reg, exp_atom(2, 0, 2 * beta)); };
  f.log2_space = [beta](const Index& i, const Exponent&) {
    if (i == kShearletLow) return 0.0;
    return 2 * beta.to_double() * static_cast<double>(i[0]);
  };
  f.space_range = [](const Exponent&) { return std::make_pair(1.0, 1.0); };
  f.default_I0 = std::vector<std::uint8_t>{kAllZ, kAllZ};
  f.moderate_note = "u = 2^{2n beta}, neighbours differ by at most 2 in n";
  return f;
}

struct CoorbitPiece {
  Region region;
  Atom norm;  // asymptotic ||T||
};

std::vector<CoorbitPiece> coorbit_pieces(const Rational& c) {
  Atom cm = exp_atom(2, 0, c);
  cm.poly[1] = 1;
  Atom cn = exp_atom(2, 0, c);
  Atom n1 = exp_atom(2, 0, 1);
  Rational mu = Rational(1) - c;
  if (c >= 1) {
    return {{ProductRegion{{kN0, kNonZero}}, cm},
            {ProductRegion{{kN0, kZeroPt}}, cn},
            {CutRegion{0, 1, true, mu, false, 0}, cm},
            {CutRegion{0, 1, true, mu, true, -1}, n1}};
  }
  return {{CutRegion{0, 1, false, mu, true, 0}, n1},
          {CutRegion{0, 1, false, mu, false, 1}, cm},
          {ProductRegion{{kNeg, kNonZero}}, cm},
          {ProductRegion{{kNeg, kZeroPt}}, cn}};
}

FamilySpec shearlet_coorbit(const FamilyParams& prm) {
  FamilySpec f;
  Rational c = prm.c;
  double cd = c.to_double();
  f.covering.name = "shearlet_coorbit";
  f.covering.dimension = 2;
  f.covering.indices = shearlet_group_indices();
  ConeSection cone{0.5, 2.0, -1.0, 1.0};
  f.covering.generate = [cone, cd](const Index& i) {
    double n = static_cast<double>(i[0]);
    double m = static_cast<double>(i[1]);
    double e = static_cast<double>(i[2]);
    Mat t(2, 2);
    t << std::exp2(n), 0, std::exp2(n * cd) * m, std::exp2(n * cd);
    return Element{i, e * t, zero_vec(2), cone};
  };
  f.covering.base_radius = 2 * std::sqrt(2.0);
  f.covering.tightness = TightnessWitness{1.0 / 3, [](const Index&) { return e1(2, 1.0); }};
  auto pieces = coorbit_pieces(c);
  f.geometry.lattice_dim = 2;
  f.geometry.to_lattice = [](const Index& i) { return std::optional<Point>(Point{i[0], i[1]}); };
  f.geometry.from_lattice = [](const Point& x) { return Index{x[0], x[1], 1}; };
  f.geometry.abs_det = ExpPolyWeight::single(2, product_region(2), exp_atom(2, 0, Rational(1) + c));
  f.geometry.growth = [pieces](int k, bool with_one) {
    std::vector<Piece> out;
    for (const auto& p : pieces) out.push_back(Piece{p.region, growth_atoms(2, p.norm, k, with_one)});
    return ExpPolyWeight(2, out);
  };
  const double kNormSpread = 2 * std::sqrt(3.0);
  f.geometry.growth_range = [kNormSpread](int k, bool) { return std::make_pair(1.0, std::pow(kNormSpread, k)); };
  Rational alpha = prm.alpha, beta = prm.beta;
  auto rate = [c, alpha](const Exponent& r) {
    return -(Rational(1) + c) * (Rational(1, 2) - r.reciprocal()) - alpha;
  };
  f.space_symbolic = [pieces, rate, beta](const Exponent& r) {
    std::vector<Piece> out;
    Rational n_rate = rate(r);
    for (const auto& p : pieces) {
      Atom a = p.norm;
      for (auto& x : a.exp_pos) x *= beta;
      for (auto& x : a.exp_neg) x *= beta;
      for (auto& x : a.poly) x *= beta;
      a.exp_pos[0] += n_rate;
      a.exp_neg[0] += n_rate;
      out.push_back(Piece{p.region, {a}});
    }
    return ExpPolyWeight(2, out);
  };
  auto gen = f.covering.generate;
  f.log2_space = [gen, rate, beta](const Index& i, const Exponent& r) {
    Element e = gen(i);
    return rate(r).to_double() * static_cast<double>(i[0]) + beta.to_double() * log2_spectral_norm(e.T);
  };
  f.space_range = [beta, kNormSpread](const Exponent&) {
    double x = std::pow(kNormSpread, beta.to_double());
    return std::make_pair(std::min(1.0, x), std::max(1.0, x));
  };
  f.moderate_note = "coorbit weight 2^{-n(1+c)(1/2-1/r)} 2^{-n alpha} ||T||^beta";
  return f;
}

FamilySpec diagonal_coorbit(const FamilyParams& prm) {
  FamilySpec f;
  int d = prm.d;
  f.covering.name = "diagonal_coorbit";
  f.covering.dimension = d;
  f.covering.indices = signed_lattice(d);
  Box box{Vec::Constant(d, 0.5), Vec::Constant(d, 2.0)};
  f.covering.generate = [d, box](const Index& i) {
    Mat t = Mat::Zero(d, d);
    for (int l = 0; l < d; ++l) t(l, l) = static_cast<double>(i[d + l]) * std::exp2(-static_cast<double>(i[l]));
    return Element{i, t, zero_vec(d), box};
  };
  f.covering.base_radius = 2 * std::sqrt(static_cast<double>(d));
  f.covering.tightness = TightnessWitness{0.5, [d](const Index&) { return Vec::Constant(d, 1.25); }};
  f.covering.analytic_neighbors = [d](const Index& i) {
    std::vector<Index> out;
    std::size_t total = 1;
    for (int l = 0; l < d; ++l) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
      Index j = i;
      std::size_t c = code;
      for (int l = 0; l < d; ++l) {
        j[l] += static_cast<std::int64_t>(c % 3) - 1;
        c /= 3;
      }
      out.push_back(j);
    }
    return out;
  };
  Region all = product_region(d);
  f.geometry.lattice_dim = d;
  f.geometry.to_lattice = [d](const Index& i) { return std::optional<Point>(Point(i.begin(), i.begin() + d)); };
  f.geometry.from_lattice = [d](const Point& x) {
    Index i(x.begin(), x.end());
    i.resize(2 * d, 1);
    return i;
  };
  Atom det = atom(d);
  for (int l = 0; l < d; ++l) det.exp_pos[l] = det.exp_neg[l] = -1;
  f.geometry.abs_det = ExpPolyWeight::single(d, all, det);
  f.geometry.growth = [d, all](int k, bool with_one) {
    if (k == 0) return one_piece(d, all, growth_atoms(d, atom(d), 0, with_one));
    std::vector<Atom> atoms;
    if (with_one) atoms.push_back(atom(d));
    for (int l = 0; l < d; ++l) atoms.push_back(exp_atom(d, l, -k));
    return one_piece(d, all, atoms);
  };
  f.geometry.growth_range = [d](int k, bool) { return std::make_pair(k == 0 ? 1.0 : 1.0 / d, 1.0); };
  auto av = prm.alpha_vec, bv = prm.beta_vec;
  f.space_symbolic = [d, all, av, bv](const Exponent& r) {
    Atom u = atom(d);
    Rational shift = Rational(1, 2) - r.reciprocal();
    for (int l = 0; l < d; ++l) {
      u.exp_pos[l] = av[l] + shift;
      u.exp_neg[l] = bv[l] + shift;
    }
    return ExpPolyWeight::single(d, all, u);
  };
  f.log2_space = [d, av, bv](const Index& i, const Exponent& r) {
    double shift = 0.5 - r.reciprocal().to_double();
    double s = 0;
    for (int l = 0; l < d; ++l) {
      double rt = (i[l] >= 0 ? av[l].to_double() : bv[l].to_double()) + shift;
      s += rt * static_cast<double>(i[l]);
    }
    return s;
  };
  f.space_range = [](const Exponent&) { return std::make_pair(1.0, 1.0); };
  f.moderate_note = "coordinatewise two-sided exponential weight";
  return f;
}

}  // namespace

std::string family_name(FamilyId id) {
  switch (id) {
    case FamilyId::HomBesov: return "hom_besov";
    case FamilyId::InhomBesov: return "inhom_besov";
    case FamilyId::AlphaModulation: return "alpha_modulation";
    case FamilyId::ShearletSmoothness: return "shearlet_smoothness";
    case FamilyId::ShearletCoorbit: return "shearlet_coorbit";
    default: return "diagonal_coorbit";
  }
}

const std::vector<FamilyId>& all_families() {
  static const std::vector<FamilyId> all{FamilyId::HomBesov,           FamilyId::InhomBesov,
                                         FamilyId::AlphaModulation,    FamilyId::ShearletSmoothness,
                                         FamilyId::ShearletCoorbit,    FamilyId::DiagonalCoorbit};
  return all;
}

FamilyId family_from_name(const std::string& name) {
  for (auto id : all_families())
    if (family_name(id) == name) return id;
  throw SchemaError("unknown family '" + name + "'");
}

FamilyParams params_from_json(FamilyId id, const json& j) {
  FamilyParams p;
  switch (id) {
    case FamilyId::HomBesov:
    case FamilyId::InhomBesov:
      require_keys(j, {"d", "s"});
      p.d = dim_param(j, 1);
      p.s = need(j, "s");
      break;
    case FamilyId::AlphaModulation:
      require_keys(j, {"d", "alpha", "gamma", "rho"});
      p.d = dim_param(j, 1);
      p.alpha = need(j, "alpha");
      p.gamma = need(j, "gamma");
      if (p.alpha < 0 || p.alpha >= 1) throw InvalidParams("alpha must lie in [0, 1)");
      if (j.contains("rho")) {
        p.rho = need(j, "rho");
        if (*p.rho <= 0) throw InvalidParams("rho must be positive");
      }
      break;
    case FamilyId::ShearletSmoothness:
      require_keys(j, {"beta"});
      p.d = 2;
      p.beta = need(j, "beta");
      break;
    case FamilyId::ShearletCoorbit:
      require_keys(j, {"c", "alpha", "beta"});
      p.d = 2;
      p.c = need(j, "c", 1);
      p.alpha = need(j, "alpha");
      p.beta = need(j, "beta");
      break;
    case FamilyId::DiagonalCoorbit: {
      require_keys(j, {"d", "alpha", "beta"});
      for (const char* key : {"alpha", "beta"})
        if (j.contains(key) && !j[key].is_array()) throw SchemaError(std::string("'") + key + "' must be an array");
      int fallback = j.contains("alpha") ? static_cast<int>(j["alpha"].size()) : 1;
      p.d = dim_param(j, fallback);
      for (const char* key : {"alpha", "beta"})
        if (j.contains(key) && j[key].size() != static_cast<std::size_t>(p.d))
          throw SchemaError(std::string("'") + key + "' needs d entries");
      p.alpha_vec.assign(p.d, Rational(0));
      p.beta_vec.assign(p.d, Rational(0));
      if (j.contains("alpha"))
        for (std::size_t l = 0; l < j["alpha"].size(); ++l) p.alpha_vec[l] = rational_from_json(j["alpha"][l]);
      if (j.contains("beta"))
        for (std::size_t l = 0; l < j["beta"].size(); ++l) p.beta_vec[l] = rational_from_json(j["beta"][l]);
      break;
    }
  }
  return p;
}

json params_to_json(FamilyId id, const FamilyParams& p) {
  json j = json::object();
  switch (id) {
    case FamilyId::HomBesov:
    case FamilyId::InhomBesov:
      j["d"] = p.d;
      j["s"] = rational_to_json(p.s);
      break;
    case FamilyId::AlphaModulation:
      j["d"] = p.d;
      j["alpha"] = rational_to_json(p.alpha);
      j["gamma"] = rational_to_json(p.gamma);
      if (p.rho) j["rho"] = rational_to_json(*p.rho);
      break;
    case FamilyId::ShearletSmoothness:
      j["beta"] = rational_to_json(p.beta);
      break;
    case FamilyId::ShearletCoorbit:
      j["c"] = rational_to_json(p.c);
      j["alpha"] = rational_to_json(p.alpha);
      j["beta"] = rational_to_json(p.beta);
      break;
    case FamilyId::DiagonalCoorbit: {
      j["d"] = p.d;
      json a = json::array(), b = json::array();
      for (const auto& v : p.alpha_vec) a.push_back(rational_to_json(v));
      for (const auto& v : p.beta_vec) b.push_back(rational_to_json(v));
      j["alpha"] = a;
      j["beta"] = b;
      break;
    }
  }
  return j;
}

FamilySpec instantiate(FamilyId id, const FamilyParams& params) {
  FamilyParams prm = params;
  FamilySpec f;
  switch (id) {
    case FamilyId::HomBesov: f = hom_besov(prm); break;
    case FamilyId::InhomBesov: f = inhom_besov(prm); break;
    case FamilyId::AlphaModulation: {
      if (!prm.rho) {
        // radius (1 + alpha0) sqrt(d) + 1, rounded up; the +1 covers the origin
        Rational a0 = prm.alpha / (Rational(1) - prm.alpha);
        double v = (1 + a0.to_double()) * std::sqrt(static_cast<double>(prm.d)) + 1;
        prm.rho = Rational(static_cast<std::int64_t>(std::ceil(v * 1000)), 1000);
      }
      f = alpha_modulation(prm);
      break;
    }
    case FamilyId::ShearletSmoothness: f = shearlet_smoothness(prm); break;
    case FamilyId::ShearletCoorbit: f = shearlet_coorbit(prm); break;
    case FamilyId::DiagonalCoorbit: f = diagonal_coorbit(prm); break;
  }
  f.id = id;
  f.params = prm;
  return f;
}

FamilySpec instantiate(const std::string& name, const json& params) {
  FamilyId id = family_from_name(name);
  return instantiate(id, params_from_json(id, params));
}

SpaceWeight space_weight(const FamilySpec& spec, const Exponent& r) {
  SpaceWeight w;
  auto ev = spec.log2_space;
  w.log2_eval = [ev, r](const Index& i) { return ev(i, r); };
  w.symbolic = spec.space_symbolic(r);
  w.range = spec.space_range(r);
  return w;
}

Rational smoothness_threshold(const FamilySpec& spec, const Exponent& p, const Exponent& r, int k,
                              const Exponent& q) {
  const auto& prm = spec.params;
  Exponent ql = lower_conjugate(q);
  switch (spec.id) {
    case FamilyId::HomBesov: return Rational(prm.d) * diff(p, q);
    case FamilyId::InhomBesov: return Rational(k) + Rational(prm.d) * diff(p, q);
    case FamilyId::AlphaModulation:
      return Rational(k) + Rational(prm.d) * (prm.alpha * diff(p, q) + (Rational(1) - prm.alpha) * excess(ql, r));
    case FamilyId::ShearletSmoothness:
      return Rational(k) + Rational(3, 2) * diff(p, q) + Rational(1, 2) * excess(ql, r);
    default: throw InvalidParams("no scalar smoothness threshold for " + family_name(spec.id));
  }
}

std::optional<RefinedRules> refined_criteria(const FamilySpec& spec, const Exponent& p, const Exponent& r, int k,
                                             const Exponent& q) {
  if (!in_open_2_inf(q)) return std::nullopt;
  const auto& prm = spec.params;
  Rational smooth;
  switch (spec.id) {
    case FamilyId::InhomBesov: smooth = prm.s; break;
    case FamilyId::AlphaModulation: smooth = prm.gamma; break;
    case FamilyId::ShearletSmoothness: smooth = prm.beta; break;
    default: return std::nullopt;
  }
  Rational t = smoothness_threshold(spec, p, r, k, q);
  bool ordered = p <= q;
  RefinedRules rr;
  rr.anchor = "Ex 7.x refined";
  bool suff_ns = r <= Exponent(2);
  bool nec_ns = r <= q;
  rr.sufficient = ordered && meets(smooth, t, suff_ns);
  rr.necessary = ordered && meets(smooth, t, nec_ns);
  rr.necessary_suffices = spec.id == FamilyId::AlphaModulation && prm.alpha.is_zero() && p == q;
  std::ostringstream a, b;
  a << "smoothness " << smooth.str() << (suff_ns ? " >= " : " > ") << t.str() << " (r " << (suff_ns ? "<=" : ">")
    << " 2)";
  b << "smoothness " << smooth.str() << (nec_ns ? " >= " : " > ") << t.str() << " (r " << (nec_ns ? "<=" : ">")
    << " q)";
  rr.detail_sufficient = a.str();
  rr.detail_necessary = b.str();
  return rr;
}

namespace {

// Shearlet coorbit solvability in (alpha, beta) for summability index Q.
bool coorbit_condition(const FamilyParams& prm, const Exponent& p, const Exponent& r, int k, const Exponent& q,
                       const Exponent& big_q) {
  Rational c = prm.c;
  Rational gamma = Rational(1, 2) - r.reciprocal() + diff(p, q);
  Rational a = prm.alpha + (Rational(1) + c) * gamma;
  Rational b = prm.beta;
  Rational kk(k);
  bool sup = r <= big_q;  // theta = inf
  Rational x = excess(big_q, r);
  if (sup) {
    if (b < kk) return false;
    if (c >= 1) return b <= a && a <= c * (b - kk);
    return max(c * b, c * (b - kk)) <= a && a <= b - kk;
  }
  if (!(b > kk + x)) return false;
  if (c >= 1) return b + (c - 1) * x < a && a < c * (b - kk);
  return max(c * b, c * (b - kk)) < a && a < b - kk + (c - 1) * x;
}

bool diagonal_condition(const FamilyParams& prm, const Exponent& p, const Exponent& r, int k,
                        const Exponent& q, const Exponent& big_q) {
  Rational g = q.reciprocal() - p.reciprocal() + r.reciprocal() - Rational(1, 2);
  bool ns = r <= big_q;
  for (int l = 0; l < prm.d; ++l) {
    if (!meets(prm.alpha_vec[l], g, ns)) return false;
    if (!meets(g - Rational(k), prm.beta_vec[l], ns)) return false;
  }
  return true;
}

Outcome from(bool suff, bool nec) {
  if (suff) return Outcome::Embeds;
  if (!nec) return Outcome::DoesNotEmbed;
  return Outcome::Undetermined;
}

}  // namespace

Outcome golden_verdict(const FamilySpec& spec, const Exponent& p, const Exponent& r, int k, const Exponent& q) {
  if (p > q) return Outcome::DoesNotEmbed;
  const auto& prm = spec.params;
  bool decisive = q <= Exponent(2) || q.is_inf();
  Exponent ql = lower_conjugate(q);
  switch (spec.id) {
    case FamilyId::HomBesov: {
      if (k >= 1) return Outcome::DoesNotEmbed;
      bool eq = prm.s == smoothness_threshold(spec, p, r, k, q);
      bool suff = eq && r <= ql;
      if (decisive) return suff ? Outcome::Embeds : Outcome::DoesNotEmbed;
      bool nec = eq && r <= q && (p != q || r <= Exponent(2));
      return from(suff, nec);
    }
    case FamilyId::InhomBesov:
    case FamilyId::ShearletSmoothness:
    case FamilyId::AlphaModulation: {
      Rational t = smoothness_threshold(spec, p, r, k, q);
      Rational sm = spec.id == FamilyId::InhomBesov ? prm.s
                    : spec.id == FamilyId::AlphaModulation ? prm.gamma
                                                           : prm.beta;
      if (decisive) return meets(sm, t, r <= ql) ? Outcome::Embeds : Outcome::DoesNotEmbed;
      bool suff = meets(sm, t, r <= Exponent(2));
      bool nec = meets(sm, t, r <= q);
      if (spec.id == FamilyId::InhomBesov) return from(suff, nec && (p != q || suff));
      if (spec.id == FamilyId::AlphaModulation && nec && prm.alpha.is_zero() && p == q) return Outcome::Embeds;
      return from(suff, nec);
    }
    case FamilyId::ShearletCoorbit: {
      bool suff = coorbit_condition(prm, p, r, k, q, ql);
      if (decisive) return suff ? Outcome::Embeds : Outcome::DoesNotEmbed;
      return from(suff, coorbit_condition(prm, p, r, k, q, q));
    }
    case FamilyId::DiagonalCoorbit: {
      bool suff = diagonal_condition(prm, p, r, k, q, ql);
      if (decisive) return suff ? Outcome::Embeds : Outcome::DoesNotEmbed;
      return from(suff, diagonal_condition(prm, p, r, k, q, q));
    }
  }
  return Outcome::Undetermined;
}

}  // namespace decomp
