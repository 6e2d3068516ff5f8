#include "decomp/exponent.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace decomp {

Exponent::Exponent(Rational v) : value_(v) {
  if (v.sign() <= 0) throw std::invalid_argument("exponent must be positive, got " + v.str());
}

Exponent Exponent::inf() {
  Exponent e;
  e.inf_ = true;
  e.value_ = Rational(0);
  return e;
}

const Rational& Exponent::value() const {
  if (inf_) throw std::logic_error("value() of infinite exponent");
  return value_;
}

double Exponent::to_double() const {
  return inf_ ? std::numeric_limits<double>::infinity() : value_.to_double();
}

std::string Exponent::str() const { return inf_ ? "inf" : value_.str(); }

std::strong_ordering operator<=>(const Exponent& a, const Exponent& b) {
  if (a.inf_ || b.inf_) return static_cast<int>(a.inf_) <=> static_cast<int>(b.inf_);
  return a.value_ <=> b.value_;
}

Exponent from_reciprocal(const Rational& recip) {
  if (recip.sign() < 0) throw std::invalid_argument("negative reciprocal exponent");
  if (recip.is_zero()) return Exponent::inf();
  return Exponent(Rational(1) / recip);
}

Exponent conjugate(const Exponent& p) {
  if (p.is_inf()) return Exponent(1);
  if (p.value() <= Rational(1)) return Exponent::inf();
  return Exponent(p.value() / (p.value() - Rational(1)));
}

Exponent lower_conjugate(const Exponent& p) { return std::min(p, conjugate(p)); }

Exponent compound(const Exponent& s, const Exponent& r) {
  if (s.is_inf()) return Exponent::inf();
  Exponent ratio = r.is_inf() ? Exponent::inf() : Exponent(r.value() / s.value());
  Exponent c = conjugate(ratio);
  if (c.is_inf()) return c;
  return Exponent(s.value() * c.value());
}

Exponent parse_exponent(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "infinity" || text == "\xE2\x88\x9E") return Exponent::inf();
  Rational v = parse_rational(text);
  return Exponent(v);
}

Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number_float()) return rational_from_double(j.get<double>());
  if (j.is_array()) {
    if (j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
      throw std::invalid_argument("rational array must be [num, den] with integers");
    return Rational(j[0].get<std::int64_t>(), j[1].get<std::int64_t>());
  }
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw std::invalid_argument("expected a rational number, got " + j.dump());
}

nlohmann::json rational_to_json(const Rational& r) {
  if (r.is_integer()) return r.num();
  return nlohmann::json::array({r.num(), r.den()});
}

Exponent exponent_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_exponent(j.get<std::string>());
  return Exponent(rational_from_json(j));
}

nlohmann::json exponent_to_json(const Exponent& p) {
  if (p.is_inf()) return "inf";
  return rational_to_json(p.value());
}

}  // namespace decomp
