#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "decomp/covering.hpp"
#include "decomp/exponent.hpp"
#include "decomp/seqspace.hpp"

namespace decomp {

enum class CriterionKind {
  UKpq,  // |det T|^{1/p-1/q} (1 + |b|^k + ||T||^k)
  V0,    // |det T|^{1/p-1/q}
  Wk,    // |det T|^{1/p-1/q} (|b|^k + ||T||^k)
  Wt,    // |det T|^{1/p-1/t} (1 + |b|^n + ||T||^n)
};

std::string kind_str(CriterionKind k);

// Closed-form view of a covering on its summation lattice.
struct SymbolicGeometry {
  int lattice_dim = 1;
  std::function<std::optional<Point>(const Index&)> to_lattice;  // nullopt: index left out of the sums
  std::function<Index(const Point&)> from_lattice;
  ExpPolyWeight abs_det;  // exact, one atom per piece
  // (1 +) |b|^k + ||T||^k up to the factor range reported by growth_range.
  std::function<ExpPolyWeight(int k, bool with_one)> growth;
  std::function<std::pair<double, double>(int k, bool with_one)> growth_range;
};

struct CriterionWeight {
  CriterionKind kind = CriterionKind::Wt;
  int k = 0;
  Exponent p, t;
  std::function<double(const Index&)> log2_eval;
  std::optional<ExpPolyWeight> symbolic;
  std::pair<double, double> range{1, 1};  // evaluator / symbolic lies in this interval
};

// log2 of the criterion formula for one covering element; 0^0 = 1.
double log2_criterion(const Mat& t, const Vec& b, CriterionKind kind, int k, const Exponent& p, const Exponent& q);
double log2_abs_det(const Mat& t);
double log2_spectral_norm(const Mat& t);

CriterionWeight build_weight(const AffineCovering& cov, const SymbolicGeometry* geo, CriterionKind kind, int k,
                             const Exponent& p, const Exponent& t);

struct SpaceWeight {
  std::function<double(const Index&)> log2_eval;
  std::optional<ExpPolyWeight> symbolic;
  std::pair<double, double> range{1, 1};
};

struct QuotientWeight {
  std::function<double(const Index&)> log2_eval;
  std::optional<ExpPolyWeight> symbolic;
  std::pair<double, double> range{1, 1};
};

QuotientWeight quotient(const CriterionWeight& num, const SpaceWeight& den);

}  // namespace decomp
