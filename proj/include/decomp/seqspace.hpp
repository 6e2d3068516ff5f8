#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "decomp/exponent.hpp"
#include "decomp/rational.hpp"

namespace decomp {

using Point = std::vector<std::int64_t>;

// Per-coordinate sector as a bit set over {negative, zero, positive}.
enum Sector : std::uint8_t {
  kNeg = 1,
  kZeroPt = 2,
  kPos = 4,
  kNonPos = kNeg | kZeroPt,
  kNonZero = kNeg | kPos,
  kN0 = kZeroPt | kPos,
  kAllZ = kNeg | kZeroPt | kPos,
};

struct ProductRegion {
  std::vector<std::uint8_t> sectors;
  bool operator==(const ProductRegion&) const = default;
};

// Z^d without the origin.
struct PuncturedRegion {
  bool operator==(const PuncturedRegion&) const = default;
};

// Planar region cut along B(t) = ceil(2^{mu t}):
// rows t >= 0 (or t <= -1 on the negative side), with |m| <= B(t) + offset (inner) or |m| >= B(t) + offset (outer).
struct CutRegion {
  int t_coord = 0;
  int m_coord = 1;
  bool negative_side = false;
  Rational mu;
  bool inner = true;
  int offset = 0;
  bool operator==(const CutRegion&) const = default;
};

using Region = std::variant<ProductRegion, PuncturedRegion, CutRegion>;

ProductRegion product_region(int dim, std::uint8_t sector = kAllZ);
bool region_contains(const Region& r, const Point& x);
std::string region_str(const Region& r);
std::int64_t cut_bound(const Rational& mu, std::int64_t t);  // ceil(2^{mu t}), saturating

// Factor 2^{log2_coeff} * prod_j 2^{a_j n_j} <n_j>^{c_j} * <|n|>^{radial}, with a_j = exp_pos[j] for n_j >= 0 and
// exp_neg[j] for n_j < 0, and <x> = max(1, |x|).
struct Atom {
  double log2_coeff = 0;
  std::vector<Rational> exp_pos, exp_neg, poly;
  Rational radial;

  static Atom unit(int dim);
  double log2_at(const Point& x) const;
  bool is_constant() const;
};

struct Piece {
  Region region;
  std::vector<Atom> atoms;  // summed
};

// Piecewise sum of atoms over disjoint regions; the index set is the union of the regions.
class ExpPolyWeight {
 public:
  ExpPolyWeight() = default;
  ExpPolyWeight(int dim, std::vector<Piece> pieces);

  static ExpPolyWeight single(int dim, Region region, Atom atom);
  static ExpPolyWeight constant(int dim, Region region, double value = 1);

  int dim() const { return dim_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  std::vector<Region> regions() const;

  // Whole-lattice single piece; combines with any piecewise weight.
  bool is_universal() const;

  std::optional<std::size_t> piece_of(const Point& x) const;
  double log2_at(const Point& x) const;  // throws std::out_of_range outside the index set
  std::string str() const;

 private:
  int dim_ = 1;
  std::vector<Piece> pieces_;
};

ExpPolyWeight operator*(const ExpPolyWeight& a, const ExpPolyWeight& b);
ExpPolyWeight operator/(const ExpPolyWeight& a, const ExpPolyWeight& b);  // b: one atom per piece
ExpPolyWeight operator+(const ExpPolyWeight& a, const ExpPolyWeight& b);
ExpPolyWeight pow(const ExpPolyWeight& w, const Rational& e);  // one atom per piece
ExpPolyWeight restrict_to(const ExpPolyWeight& w, const std::vector<std::uint8_t>& sectors);

nlohmann::json weight_to_json(const ExpPolyWeight& w);
ExpPolyWeight weight_from_json(const nlohmann::json& j);

enum class Membership { Member, NotMember };

// Exact closed-form decision of w in l^theta(index set); throws UnsupportedWeight outside the atom class.
Membership decide_lp_membership(const ExpPolyWeight& w, const Exponent& theta);

struct SequenceDecision {
  bool embeds = false;
  Exponent exponent;  // compound(s, r)
};

// l_v^r -> l_u^s boundedness.
SequenceDecision decide_sequence_embedding(const ExpPolyWeight& u, const ExpPolyWeight& v, const Exponent& r,
                                           const Exponent& s);

// Visits every point of the region at level <= radius, with its level. Inner cut rows enter whole.
void for_each_point(const Region& region, int dim, std::int64_t radius,
                    const std::function<void(const Point&, std::int64_t)>& f);

enum class TailKind { Convergent, Divergent, Inconclusive };

struct TailClassification {
  TailKind kind = TailKind::Inconclusive;
  double log2_partial = 0;  // log2 of the partial sum (sup for theta = inf), -inf if empty
  double log2_tail = 0;     // log2 of the tail bound, Convergent only
  double growth = 0;        // ratio of the last two partial sums
  std::int64_t window_radius = 0;
  std::vector<std::int64_t> radii;
  std::vector<double> log2_shells;
};

std::string tail_kind_str(TailKind k);
nlohmann::json tail_to_json(const TailClassification& t);

std::vector<std::int64_t> default_schedule(int dim);

TailClassification truncated_oracle(const std::vector<Region>& domain, int dim,
                                    const std::function<double(const Point&)>& log2_w, const Exponent& theta,
                                    std::vector<std::int64_t> radii = {});
TailClassification truncated_oracle(const ExpPolyWeight& w, const Exponent& theta,
                                    std::vector<std::int64_t> radii = {});

// Truncated norms on the lattice points of w's regions at level <= radius.
struct WindowPoint {
  Point x;
  double log2_u = 0;
  double log2_v = 0;
};
std::vector<WindowPoint> window_points(const ExpPolyWeight& u, const ExpPolyWeight& v, std::int64_t radius);

// log2 of ||u/v||_{l^t} over the window, t = compound(s, r).
double log2_quotient_norm(const std::vector<WindowPoint>& pts, const Exponent& r, const Exponent& s);

// log2 ||c||_{l^s_u} and log2 ||c||_{l^r_v} for coefficients given as log2|c_i| (-inf for zero).
double log2_weighted_norm(const std::vector<double>& log2_c, const std::vector<double>& log2_w, const Exponent& e);

// The extremal sequence c_i = (u_i/v_i)^beta / u_i, or a unit mass at the largest quotient when compound(s, r) = inf.
std::vector<double> witness_sequence(const std::vector<WindowPoint>& pts, const Exponent& r, const Exponent& s);

}  // namespace decomp
