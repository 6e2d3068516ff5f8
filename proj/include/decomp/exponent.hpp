#pragma once

#include <compare>
#include <string>

#include "json.hpp"

#include "decomp/rational.hpp"

namespace decomp {

// Lebesgue exponent in (0, inf], stored exactly.
class Exponent {
 public:
  Exponent() : value_(1) {}
  Exponent(Rational v);  // NOLINT: throws std::invalid_argument unless v > 0
  Exponent(std::int64_t v) : Exponent(Rational(v)) {}  // NOLINT

  static Exponent inf();

  bool is_inf() const { return inf_; }
  const Rational& value() const;  // throws std::logic_error for inf
  Rational reciprocal() const { return inf_ ? Rational(0) : Rational(1) / value_; }
  double to_double() const;
  std::string str() const;

  friend bool operator==(const Exponent& a, const Exponent& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.value_ == b.value_);
  }
  friend std::strong_ordering operator<=>(const Exponent& a, const Exponent& b);

 private:
  Rational value_;
  bool inf_ = false;
};

Exponent from_reciprocal(const Rational& recip);  // 0 -> inf

Exponent conjugate(const Exponent& p);
Exponent lower_conjugate(const Exponent& p);
// s * (r/s)' with the conventions inf' = 1, r/s = inf for r = inf, and inf for s = inf.
Exponent compound(const Exponent& s, const Exponent& r);

Exponent parse_exponent(const std::string& text);
Exponent exponent_from_json(const nlohmann::json& j);
nlohmann::json exponent_to_json(const Exponent& p);

Rational rational_from_json(const nlohmann::json& j);
nlohmann::json rational_to_json(const Rational& r);

}  // namespace decomp
