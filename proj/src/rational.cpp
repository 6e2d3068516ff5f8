#include "decomp/rational.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace decomp {

namespace {

constexpr __int128 kMax = std::numeric_limits<std::int64_t>::max();

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  *this = from_wide(n, d);
}

Rational Rational::from_wide(__int128 n, __int128 d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  if (n > kMax || n < -kMax || d > kMax) throw std::overflow_error("rational overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(n);
  r.den_ = static_cast<std::int64_t>(d);
  return r;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  if (den_ == o.den_) return *this = from_wide(static_cast<__int128>(num_) + o.num_, den_);
  return *this = from_wide(static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_,
                           static_cast<__int128>(den_) * o.den_);
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
  return *this = from_wide(static_cast<__int128>(num_) * o.num_, static_cast<__int128>(den_) * o.den_);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) throw std::domain_error("rational division by zero");
  return *this = from_wide(static_cast<__int128>(num_) * o.den_, static_cast<__int128>(den_) * o.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
  __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }
Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }
Rational positive_part(const Rational& x) { return x.sign() > 0 ? x : Rational(0); }

std::int64_t floor(const Rational& x) {
  std::int64_t q = x.num() / x.den();
  if (x.num() % x.den() != 0 && x.num() < 0) --q;
  return q;
}

std::int64_t ceil(const Rational& x) { return -floor(-x); }

Rational rational_from_double(double x, std::int64_t max_den) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite number cannot be made rational");
  // Continued-fraction convergents; accept the first whose double image is exactly x.
  double rem = x;
  __int128 h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    double a = std::floor(rem);
    if (std::fabs(a) > 9.0e15) break;
    auto ai = static_cast<__int128>(a);
    __int128 h2 = ai * h1 + h0;
    __int128 k2 = ai * k1 + k0;
    if (k2 > max_den || h2 > kMax || h2 < -kMax) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (static_cast<double>(h1) / static_cast<double>(k1) == x) {
      return Rational(static_cast<std::int64_t>(h1), static_cast<std::int64_t>(k1));
    }
    double frac = rem - a;
    if (frac == 0.0) break;
    rem = 1.0 / frac;
  }
  throw std::invalid_argument("number " + std::to_string(x) + " is not a rational with denominator <= " +
                              std::to_string(max_den));
}

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    std::size_t used1 = 0, used2 = 0;
    std::string a = text.substr(0, slash), b = text.substr(slash + 1);
    long long n = 0, d = 0;
    try {
      n = std::stoll(a, &used1);
      d = std::stoll(b, &used2);
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed rational '" + text + "'");
    }
    if (used1 != a.size() || used2 != b.size() || d == 0) throw std::invalid_argument("malformed rational '" + text + "'");
    return Rational(n, d);
  }
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed number '" + text + "'");
  }
  if (used != text.size()) throw std::invalid_argument("malformed number '" + text + "'");
  return rational_from_double(v);
}

}  // namespace decomp
