#include "decomp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "decomp/errors.hpp"

namespace decomp {

namespace {

constexpr double kRelTol = 1e-12;

using P2 = Eigen::Vector2d;
using Poly = std::vector<P2>;

double signed_area(const Poly& p) {
  double a = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const P2& u = p[i];
    const P2& v = p[(i + 1) % p.size()];
    a += u.x() * v.y() - v.x() * u.y();
  }
  return a / 2;
}

// Keep the part of p with n . x <= c.
Poly clip(const Poly& p, const P2& n, double c) {
  Poly out;
  if (p.empty()) return out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const P2& u = p[i];
    const P2& v = p[(i + 1) % p.size()];
    double fu = n.dot(u) - c;
    double fv = n.dot(v) - c;
    if (fu <= 0) out.push_back(u);
    if ((fu < 0 && fv > 0) || (fu > 0 && fv < 0)) {
      double s = fu / (fu - fv);
      out.push_back(u + s * (v - u));
    }
  }
  return out;
}

double poly_intersection_area(const Poly& a, const Poly& b) {
  Poly cur = a;
  for (std::size_t i = 0; i < b.size() && !cur.empty(); ++i) {
    const P2& u = b[i];
    const P2& v = b[(i + 1) % b.size()];
    P2 edge = v - u;
    P2 outward(edge.y(), -edge.x());  // right-hand normal of a CCW edge points outside
    cur = clip(cur, outward, outward.dot(u));
  }
  return cur.size() < 3 ? 0.0 : std::fabs(signed_area(cur));
}

Poly make_ccw(Poly p) {
  if (signed_area(p) < 0) std::reverse(p.begin(), p.end());
  return p;
}

bool is_conformal(const Mat& t, double& scale) {
  Mat g = t.transpose() * t;
  double l2 = g(0, 0);
  double tol = kRelTol * 16 * std::max(l2, g.cwiseAbs().maxCoeff());
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j) {
      double want = i == j ? l2 : 0.0;
      if (std::fabs(g(i, j) - want) > tol) return false;
    }
  scale = std::sqrt(l2);
  return true;
}

bool is_diagonal(const Mat& t) {
  for (int i = 0; i < t.rows(); ++i)
    for (int j = 0; j < t.cols(); ++j)
      if (i != j && t(i, j) != 0.0) return false;
  return true;
}

Poly cone_vertices(const ConeSection& c) {
  return {P2(c.x_lo, c.slope_lo * c.x_lo), P2(c.x_hi, c.slope_lo * c.x_hi), P2(c.x_hi, c.slope_hi * c.x_hi),
          P2(c.x_lo, c.slope_hi * c.x_lo)};
}

Poly box_vertices(const Vec& lo, const Vec& hi) {
  return {P2(lo(0), lo(1)), P2(hi(0), lo(1)), P2(hi(0), hi(1)), P2(lo(0), hi(1))};
}

void bounding_ball(const BaseSet& q, Vec& c, double& r) {
  if (auto* b = std::get_if<Ball>(&q)) {
    c = b->center;
    r = b->radius;
  } else if (auto* a = std::get_if<Annulus>(&q)) {
    c = Vec();  // caller fills dimension
    r = a->outer;
  } else if (auto* x = std::get_if<Box>(&q)) {
    c = (x->lo + x->hi) / 2;
    r = ((x->hi - x->lo) / 2).norm();
  } else {
    const auto& cs = std::get<ConeSection>(q);
    Poly v = cone_vertices(cs);
    c = Vec(2);
    c << (cs.x_lo + cs.x_hi) / 2, 0.0;
    r = 0;
    for (const auto& p : v) r = std::max(r, (p - Eigen::Vector2d(c(0), c(1))).norm());
  }
}

struct BallBound {
  Vec c;
  double r;
};

BallBound image_ball(const Image& img) {
  return std::visit(
      [](const auto& s) -> BallBound {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, RadialImage>) {
          return {s.center, s.outer};
        } else if constexpr (std::is_same_v<S, BoxImage>) {
          return {(s.lo + s.hi) / 2, ((s.hi - s.lo) / 2).norm()};
        } else if constexpr (std::is_same_v<S, PolygonImage>) {
          P2 c(0, 0);
          for (const auto& v : s.vertices) c += v;
          c /= static_cast<double>(s.vertices.size());
          double r = 0;
          for (const auto& v : s.vertices) r = std::max(r, (v - c).norm());
          Vec cc(2);
          cc << c.x(), c.y();
          return {cc, r};
        } else {
          return {s.center, s.radius};
        }
      },
      img.shape);
}

bool interval_overlap(double a_lo, double a_hi, double b_lo, double b_hi, double scale) {
  return std::min(a_hi, b_hi) - std::max(a_lo, b_lo) > kRelTol * scale;
}

Overlap radial_pair(const RadialImage& a, const RadialImage& b) {
  double scale = std::max({a.outer, b.outer, a.center.norm(), b.center.norm()});
  if (a.center.size() == 1) {
    // Shells on the line are unions of at most two intervals.
    auto pieces = [](const RadialImage& s) {
      std::vector<std::pair<double, double>> out;
      double c = s.center(0);
      if (s.solid) {
        out.emplace_back(c - s.outer, c + s.outer);
      } else {
        out.emplace_back(c - s.outer, c - s.inner);
        out.emplace_back(c + s.inner, c + s.outer);
      }
      return out;
    };
    for (auto [l1, h1] : pieces(a))
      for (auto [l2, h2] : pieces(b))
        if (interval_overlap(l1, h1, l2, h2, scale)) return {true, false};
    return {false, false};
  }
  double dist = (a.center - b.center).norm();
  if (dist <= kRelTol * scale) return {interval_overlap(a.inner, a.outer, b.inner, b.outer, scale), false};
  // Feasible radius pairs for two centres at distance D: |r1 - r2| <= D <= r1 + r2.
  Poly rect = {P2(a.inner, b.inner), P2(a.outer, b.inner), P2(a.outer, b.outer), P2(a.inner, b.outer)};
  rect = clip(rect, P2(1, -1), dist);
  rect = clip(rect, P2(-1, 1), dist);
  rect = clip(rect, P2(-1, -1), -dist);
  double area = rect.size() < 3 ? 0.0 : std::fabs(signed_area(rect));
  double ref = (a.outer - a.inner) * (b.outer - b.inner);
  return {area > kRelTol * ref, false};
}

}  // namespace

double spectral_norm(const Mat& a) {
  if (a.size() == 0) return 0;
  double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0) return 0;
  if (a.rows() == 1 && a.cols() == 1) return std::fabs(a(0, 0));
  Mat m = a / scale;
  if (a.rows() == 2 && a.cols() == 2) {
    double s = m.squaredNorm();
    double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    double disc = std::max(0.0, s * s - 4 * det * det);
    return scale * std::sqrt((s + std::sqrt(disc)) / 2);
  }
  Mat g = m.transpose() * m;
  Vec x = Vec::Ones(g.cols()) / std::sqrt(static_cast<double>(g.cols()));
  double lambda = 0;
  for (int it = 0; it < 10000; ++it) {
    Vec y = g * x;
    double n = y.norm();
    if (n == 0) return 0;
    y /= n;
    double next = y.dot(g * y);
    bool done = std::fabs(next - lambda) <= 1e-12 * std::max(1.0, next);
    lambda = next;
    x = y;
    if (done) break;
  }
  return scale * std::sqrt(lambda);
}

std::string describe(const BaseSet& q) {
  std::ostringstream os;
  if (auto* b = std::get_if<Ball>(&q)) {
    os << "ball(r=" << b->radius << ")";
  } else if (auto* a = std::get_if<Annulus>(&q)) {
    os << "annulus(" << a->inner << "," << a->outer << ")";
  } else if (std::get_if<Box>(&q)) {
    os << "box";
  } else {
    const auto& c = std::get<ConeSection>(q);
    os << "cone(x in (" << c.x_lo << "," << c.x_hi << "), y/x in (" << c.slope_lo << "," << c.slope_hi << "))";
  }
  return os.str();
}

nlohmann::json base_set_to_json(const BaseSet& q) {
  using nlohmann::json;
  auto vec = [](const Vec& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
  };
  if (auto* b = std::get_if<Ball>(&q)) return json{{"ball", {{"center", vec(b->center)}, {"radius", b->radius}}}};
  if (auto* a = std::get_if<Annulus>(&q)) return json{{"annulus", {{"inner", a->inner}, {"outer", a->outer}}}};
  if (auto* x = std::get_if<Box>(&q)) return json{{"box", {{"lo", vec(x->lo)}, {"hi", vec(x->hi)}}}};
  const auto& c = std::get<ConeSection>(q);
  return json{{"cone", {{"x", {c.x_lo, c.x_hi}}, {"slope", {c.slope_lo, c.slope_hi}}}}};
}

BaseSet base_set_from_json(const nlohmann::json& j, int dim) {
  if (!j.is_object() || j.size() != 1) throw SchemaError("base_set must be an object with one key");
  auto vec = [dim](const nlohmann::json& a) {
    if (!a.is_array() || static_cast<int>(a.size()) != dim) throw SchemaError("vector of wrong dimension in base_set");
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = a[i].get<double>();
    return v;
  };
  auto allowed = [](const nlohmann::json& o, std::initializer_list<const char*> keys) {
    for (auto it = o.begin(); it != o.end(); ++it) {
      bool ok = false;
      for (const char* k : keys) ok = ok || it.key() == k;
      if (!ok) throw SchemaError("unknown base_set field '" + it.key() + "'");
    }
  };
  const std::string kind = j.begin().key();
  const auto& body = j.begin().value();
  if (kind == "ball") {
    allowed(body, {"center", "radius"});
    Ball b{body.contains("center") ? vec(body["center"]) : Vec(Vec::Zero(dim)), body.at("radius").get<double>()};
    if (b.radius <= 0) throw SchemaError("ball radius must be positive");
    return b;
  }
  if (kind == "annulus") {
    allowed(body, {"inner", "outer"});
    Annulus a{body.at("inner").get<double>(), body.at("outer").get<double>()};
    if (a.inner < 0 || a.outer <= a.inner) throw SchemaError("annulus needs 0 <= inner < outer");
    return a;
  }
  if (kind == "box") {
    allowed(body, {"lo", "hi"});
    Box b{vec(body.at("lo")), vec(body.at("hi"))};
    if (((b.hi - b.lo).array() <= 0).any()) throw SchemaError("box needs lo < hi");
    return b;
  }
  if (kind == "cone") {
    if (dim != 2) throw SchemaError("cone sections are planar");
    allowed(body, {"x", "slope"});
    ConeSection c{body.at("x").at(0).get<double>(), body.at("x").at(1).get<double>(),
                  body.at("slope").at(0).get<double>(), body.at("slope").at(1).get<double>()};
    if (c.x_lo < 0 || c.x_hi <= c.x_lo || c.slope_hi <= c.slope_lo) throw SchemaError("malformed cone section");
    return c;
  }
  throw SchemaError("unknown base_set kind '" + kind + "'");
}

double sup_norm(const BaseSet& q) {
  if (auto* b = std::get_if<Ball>(&q)) return b->center.norm() + b->radius;
  if (auto* a = std::get_if<Annulus>(&q)) return a->outer;
  if (auto* x = std::get_if<Box>(&q)) return x->lo.cwiseAbs().cwiseMax(x->hi.cwiseAbs()).norm();
  double r = 0;
  for (const auto& v : cone_vertices(std::get<ConeSection>(q))) r = std::max(r, v.norm());
  return r;
}

bool contains_ball(const BaseSet& q, const Vec& c, double eps) {
  if (auto* b = std::get_if<Ball>(&q)) return (c - b->center).norm() + eps <= b->radius;
  if (auto* a = std::get_if<Annulus>(&q)) return c.norm() - eps >= a->inner && c.norm() + eps <= a->outer;
  if (auto* x = std::get_if<Box>(&q)) return ((c.array() - eps) >= x->lo.array()).all() && ((c.array() + eps) <= x->hi.array()).all();
  const auto& s = std::get<ConeSection>(q);
  if (c.size() != 2) return false;
  double x = c(0), y = c(1);
  if (x - eps < s.x_lo || x + eps > s.x_hi) return false;
  double below = (y - s.slope_lo * x) / std::sqrt(1 + s.slope_lo * s.slope_lo);
  double above = (s.slope_hi * x - y) / std::sqrt(1 + s.slope_hi * s.slope_hi);
  return below >= eps && above >= eps;
}

Image image_of(const Mat& t, const Vec& b, const BaseSet& q) {
  const int dim = static_cast<int>(t.rows());
  Image img;
  double lambda = 0;
  if (auto* ball = std::get_if<Ball>(&q); ball && is_conformal(t, lambda)) {
    RadialImage r{t * ball->center + b, 0.0, lambda * ball->radius, true};
    img.shape = r;
  } else if (auto* ann = std::get_if<Annulus>(&q); ann && is_conformal(t, lambda)) {
    RadialImage r{b, lambda * ann->inner, lambda * ann->outer, ann->inner == 0};
    img.shape = r;
  } else if (auto* box = std::get_if<Box>(&q); box && is_diagonal(t)) {
    Vec lo(dim), hi(dim);
    for (int i = 0; i < dim; ++i) {
      double u = t(i, i) * box->lo(i), v = t(i, i) * box->hi(i);
      lo(i) = std::min(u, v) + b(i);
      hi(i) = std::max(u, v) + b(i);
    }
    img.shape = BoxImage{lo, hi};
  } else if (dim == 2 && (std::holds_alternative<Box>(q) || std::holds_alternative<ConeSection>(q))) {
    Poly base = std::holds_alternative<Box>(q) ? box_vertices(std::get<Box>(q).lo, std::get<Box>(q).hi)
                                               : cone_vertices(std::get<ConeSection>(q));
    Mat t2 = t;
    Poly out;
    for (const auto& v : base) out.push_back(t2.topLeftCorner<2, 2>() * v + P2(b(0), b(1)));
    img.shape = PolygonImage{make_ccw(out)};
  } else {
    Vec c;
    double r = 0;
    bounding_ball(q, c, r);
    if (c.size() == 0) c = Vec::Zero(dim);
    img.shape = HullImage{t * c + b, spectral_norm(t) * r};
    img.approximate = true;
  }
  std::visit(
      [&img, dim](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, RadialImage>) {
          img.bb_lo = s.center.array() - s.outer;
          img.bb_hi = s.center.array() + s.outer;
        } else if constexpr (std::is_same_v<S, BoxImage>) {
          img.bb_lo = s.lo;
          img.bb_hi = s.hi;
        } else if constexpr (std::is_same_v<S, PolygonImage>) {
          img.bb_lo = Vec::Constant(dim, std::numeric_limits<double>::infinity());
          img.bb_hi = Vec::Constant(dim, -std::numeric_limits<double>::infinity());
          for (const auto& v : s.vertices)
            for (int i = 0; i < 2; ++i) {
              img.bb_lo(i) = std::min(img.bb_lo(i), v(i));
              img.bb_hi(i) = std::max(img.bb_hi(i), v(i));
            }
        } else {
          img.bb_lo = s.center.array() - s.radius;
          img.bb_hi = s.center.array() + s.radius;
        }
      },
      img.shape);
  return img;
}

double image_sup_norm(const Image& img) {
  return std::visit(
      [](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, RadialImage>) {
          return s.center.norm() + s.outer;
        } else if constexpr (std::is_same_v<S, BoxImage>) {
          return s.lo.cwiseAbs().cwiseMax(s.hi.cwiseAbs()).norm();
        } else if constexpr (std::is_same_v<S, PolygonImage>) {
          double r = 0;
          for (const auto& v : s.vertices) r = std::max(r, v.norm());
          return r;
        } else {
          return s.center.norm() + s.radius;
        }
      },
      img.shape);
}

Overlap intersect(const Image& a, const Image& b) {
  if (a.bb_lo.size() != b.bb_lo.size()) throw UnsupportedGeometry("images of different dimension");
  if (auto* ra = std::get_if<RadialImage>(&a.shape))
    if (auto* rb = std::get_if<RadialImage>(&b.shape)) return radial_pair(*ra, *rb);
  if (auto* ba = std::get_if<BoxImage>(&a.shape))
    if (auto* bb = std::get_if<BoxImage>(&b.shape)) {
      for (int i = 0; i < ba->lo.size(); ++i) {
        double scale = std::max({std::fabs(ba->lo(i)), std::fabs(ba->hi(i)), std::fabs(bb->lo(i)), std::fabs(bb->hi(i))});
        if (!interval_overlap(ba->lo(i), ba->hi(i), bb->lo(i), bb->hi(i), scale)) return {false, false};
      }
      return {true, false};
    }
  auto as_poly = [](const Image& img, Poly& out) {
    if (auto* p = std::get_if<PolygonImage>(&img.shape)) {
      out = p->vertices;
      return true;
    }
    if (auto* x = std::get_if<BoxImage>(&img.shape); x && x->lo.size() == 2) {
      out = box_vertices(x->lo, x->hi);
      return true;
    }
    return false;
  };
  Poly pa, pb;
  if (as_poly(a, pa) && as_poly(b, pb)) {
    double area = poly_intersection_area(pa, pb);
    double ref = std::min(std::fabs(signed_area(pa)), std::fabs(signed_area(pb)));
    return {area > kRelTol * ref, false};
  }
  BallBound x = image_ball(a), y = image_ball(b);
  bool hit = (x.c - y.c).norm() < x.r + y.r;
  return {hit, hit};
}

}  // namespace decomp
