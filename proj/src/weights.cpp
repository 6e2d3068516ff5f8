#include "decomp/weights.hpp"

#include "decomp/errors.hpp"

#include <cmath>
#include <limits>

namespace decomp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double lse(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double m = std::max(a, b);
  return m + std::log2(std::exp2(a - m) + std::exp2(b - m));
}

double max_abs(const Mat& t) { return t.cwiseAbs().maxCoeff(); }

}  // namespace

std::string kind_str(CriterionKind k) {
  switch (k) {
    case CriterionKind::UKpq: return "u_kpq";
    case CriterionKind::V0: return "v0";
    case CriterionKind::Wk: return "w_k";
    default: return "w_t";
  }
}

double log2_abs_det(const Mat& t) {
  double s = max_abs(t);
  return static_cast<double>(t.rows()) * std::log2(s) + std::log2(std::fabs((t / s).determinant()));
}

double log2_spectral_norm(const Mat& t) {
  double s = max_abs(t);
  return std::log2(s) + std::log2(spectral_norm(t / s));
}

double log2_criterion(const Mat& t, const Vec& b, CriterionKind kind, int k, const Exponent& p, const Exponent& q) {
  double x = (p.reciprocal() - q.reciprocal()).to_double();
  double v = x * log2_abs_det(t);
  if (kind == CriterionKind::V0) return v;
  double g = kind == CriterionKind::Wk ? kNegInf : 0.0;
  double bn = b.norm();
  if (k == 0) {
    g = lse(g, 0.0);
  } else if (bn > 0) {
    g = lse(g, k * std::log2(bn));
  }
  g = lse(g, k * log2_spectral_norm(t));
  return v + g;
}

CriterionWeight build_weight(const AffineCovering& cov, const SymbolicGeometry* geo, CriterionKind kind, int k,
                             const Exponent& p, const Exponent& t) {
  if (k < 0) throw InvalidParams("derivative order must be >= 0");
  CriterionWeight w;
  w.kind = kind;
  w.k = k;
  w.p = p;
  w.t = t;
  auto gen = cov.generate;
  w.log2_eval = [gen, kind, k, p, t](const Index& i) {
    Element e = gen(i);
    return log2_criterion(e.T, e.b, kind, k, p, t);
  };
  if (geo) {
    ExpPolyWeight det = pow(geo->abs_det, p.reciprocal() - t.reciprocal());
    if (kind == CriterionKind::V0) {
      w.symbolic = det;
    } else {
      bool with_one = kind != CriterionKind::Wk;
      w.symbolic = det * geo->growth(k, with_one);
      w.range = geo->growth_range(k, with_one);
    }
  }
  return w;
}

QuotientWeight quotient(const CriterionWeight& num, const SpaceWeight& den) {
  QuotientWeight q;
  auto a = num.log2_eval;
  auto b = den.log2_eval;
  q.log2_eval = [a, b](const Index& i) { return a(i) - b(i); };
  if (num.symbolic && den.symbolic) q.symbolic = *num.symbolic / *den.symbolic;
  q.range = {num.range.first / den.range.second, num.range.second / den.range.first};
  return q;
}

}  // namespace decomp
