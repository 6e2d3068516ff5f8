#include "decomp/grid.hpp"

#include <algorithm>
#include <sstream>

#include "decomp/embedding.hpp"

namespace decomp {

namespace {

const std::vector<Rational>& offsets() {
  static const std::vector<Rational> o{Rational(-1, 2), Rational(-1, 4), 0, Rational(1, 4), Rational(1, 2)};
  return o;
}

void sorted_unique(std::vector<Rational>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

Rational excess(const Exponent& big_q, const Exponent& r) { return compound(big_q, r).reciprocal(); }

}  // namespace

const std::vector<Exponent>& grid_exponents() {
  static const std::vector<Exponent> e{Exponent(Rational(1, 2)), Exponent(1), Exponent(Rational(3, 2)),
                                       Exponent(2),              Exponent(3), Exponent::inf()};
  return e;
}

void for_each_grid_case(FamilyId id, const std::function<void(const GridCase&)>& f) {
  for (const auto& p : grid_exponents())
    for (const auto& q : grid_exponents())
      for (const auto& r : grid_exponents())
        for (int k = 0; k <= 2; ++k) {
          auto emit = [&](const FamilyParams& prm) {
            FamilySpec spec = instantiate(id, prm);
            f(GridCase{spec, p, r, q, k});
          };
          switch (id) {
            case FamilyId::HomBesov:
            case FamilyId::InhomBesov:
              for (int d = 1; d <= 2; ++d) {
                FamilyParams prm;
                prm.d = d;
                Rational t = smoothness_threshold(instantiate(id, prm), p, r, k, q);
                for (const auto& o : offsets()) {
                  prm.s = t + o;
                  emit(prm);
                }
              }
              break;
            case FamilyId::AlphaModulation:
              for (int d = 1; d <= 2; ++d)
                for (Rational a : {Rational(0), Rational(1, 3), Rational(1, 2)}) {
                  FamilyParams prm;
                  prm.d = d;
                  prm.alpha = a;
                  Rational t = smoothness_threshold(instantiate(id, prm), p, r, k, q);
                  for (const auto& o : offsets()) {
                    prm.gamma = t + o;
                    emit(prm);
                  }
                }
              break;
            case FamilyId::ShearletSmoothness: {
              FamilyParams prm;
              Rational t = smoothness_threshold(instantiate(id, prm), p, r, k, q);
              for (const auto& o : offsets()) {
                prm.beta = t + o;
                emit(prm);
              }
              break;
            }
            case FamilyId::ShearletCoorbit:
              for (Rational c : {Rational(-1), Rational(1, 2), Rational(1), Rational(2)}) {
                Rational gamma = Rational(1, 2) - r.reciprocal() + p.reciprocal() - q.reciprocal();
                Rational kk(k);
                std::vector<Rational> xs{excess(lower_conjugate(q), r), excess(q, r)};
                std::vector<Rational> betas{kk - Rational(1, 4), kk, kk + Rational(1, 4)};
                for (const auto& x : xs)
                  for (Rational dl : {Rational(-1, 4), Rational(0), Rational(1, 4), Rational(1), Rational(2)})
                    betas.push_back(kk + x + dl);
                sorted_unique(betas);
                for (const auto& b : betas) {
                  std::vector<Rational> as;
                  for (const auto& x : xs)
                    for (const Rational& bd : {b, c * (b - kk), b + (c - 1) * x, c * b, b - kk, b - kk + (c - 1) * x})
                      for (Rational o : {Rational(-1, 4), Rational(0), Rational(1, 4)}) as.push_back(bd + o);
                  sorted_unique(as);
                  for (const auto& a : as) {
                    FamilyParams prm;
                    prm.c = c;
                    prm.beta = b;
                    prm.alpha = a - (Rational(1) + c) * gamma;
                    emit(prm);
                  }
                }
              }
              break;
            case FamilyId::DiagonalCoorbit:
              for (int d = 1; d <= 2; ++d) {
                Rational g = q.reciprocal() - p.reciprocal() + r.reciprocal() - Rational(1, 2);
                std::vector<Rational> near{Rational(-1, 4), Rational(0), Rational(1, 4)};
                std::size_t combos = 1;
                for (int l = 0; l < 2 * d; ++l) combos *= near.size();
                for (std::size_t code = 0; code < combos; ++code) {
                  FamilyParams prm;
                  prm.d = d;
                  std::size_t cc = code;
                  for (int l = 0; l < d; ++l) {
                    prm.alpha_vec.push_back(g + near[cc % 3]);
                    cc /= 3;
                  }
                  for (int l = 0; l < d; ++l) {
                    prm.beta_vec.push_back(g - Rational(k) + near[cc % 3]);
                    cc /= 3;
                  }
                  emit(prm);
                }
              }
              break;
          }
        }
}

GridSummary run_golden_grid(FamilyId id) {
  GridSummary s;
  DecideOptions opt;
  opt.refine = true;
  for_each_grid_case(id, [&](const GridCase& c) {
    ++s.queries;
    Outcome g = golden_verdict(c.spec, c.p, c.r, c.k, c.q);
    std::ostringstream where;
    where << params_to_json(id, c.spec.params).dump() << " p=" << c.p.str() << " r=" << c.r.str() << " k=" << c.k
          << " q=" << c.q.str();
    try {
      Outcome e = decide_sobolev(c.spec, c.p, c.r, c.k, c.q, opt).outcome;
      if (e == Outcome::Undetermined) ++s.undetermined;
      if (e == g) {
        ++s.agree;
      } else if (s.first_failures.size() < 10) {
        s.first_failures.push_back(where.str() + " engine=" + outcome_str(e) + " golden=" + outcome_str(g));
      }
    } catch (const std::exception& ex) {
      ++s.errors;
      if (s.first_failures.size() < 10) s.first_failures.push_back(where.str() + " error: " + ex.what());
    }
  });
  return s;
}

}  // namespace decomp
