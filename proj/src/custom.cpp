#include "decomp/custom.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include "decomp/errors.hpp"

namespace decomp {

namespace {

using Fn = std::function<double(const Index&)>;

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  Fn parse() {
    Fn f = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return f;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw SchemaError("expression '" + s_ + "' at " + std::to_string(pos_) + ": " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Fn expr() {
    Fn f = term();
    for (;;) {
      if (eat('+')) {
        Fn g = term();
        f = [f, g](const Index& i) { return f(i) + g(i); };
      } else if (eat('-')) {
        Fn g = term();
        f = [f, g](const Index& i) { return f(i) - g(i); };
      } else {
        return f;
      }
    }
  }

  Fn term() {
    Fn f = unary();
    for (;;) {
      if (eat('*')) {
        Fn g = unary();
        f = [f, g](const Index& i) { return f(i) * g(i); };
      } else if (eat('/')) {
        Fn g = unary();
        f = [f, g](const Index& i) { return f(i) / g(i); };
      } else {
        return f;
      }
    }
  }

  Fn unary() {
    if (eat('-')) {
      Fn g = unary();
      return [g](const Index& i) { return -g(i); };
    }
    if (eat('+')) return unary();
    Fn b = atom();
    if (eat('^')) {
      Fn e = unary();
      return [b, e](const Index& i) { return std::pow(b(i), e(i)); };
    }
    return b;
  }

  Fn variable(const std::string& id) {
    auto comp = [this](std::size_t j) -> Fn {
      return [j, this_s = s_](const Index& i) {
        if (j >= i.size()) throw SchemaError("expression '" + this_s + "' uses i" + std::to_string(j) + " beyond index");
        return static_cast<double>(i[j]);
      };
    };
    if (id == "n") return comp(0);
    if (id == "m") return comp(1);
    if (id.size() == 2 && id[0] == 'i' && std::isdigit(static_cast<unsigned char>(id[1])))
      return comp(static_cast<std::size_t>(id[1] - '0'));
    if (id == "norm")
      return [](const Index& i) {
        double s = 0;
        for (auto v : i) s += static_cast<double>(v) * static_cast<double>(v);
        return std::sqrt(s);
      };
    if (id == "pi") return [](const Index&) { return std::numbers::pi; };
    fail("unknown name '" + id + "'");
  }

  Fn call(const std::string& id) {
    std::vector<Fn> args;
    if (!eat(')')) {
      do args.push_back(expr());
      while (eat(','));
      if (!eat(')')) fail("expected ')'");
    }
    auto want = [&](std::size_t n) {
      if (args.size() != n) fail(id + " takes " + std::to_string(n) + " argument(s)");
    };
    using U = double (*)(double);
    U u = nullptr;
    if (id == "abs") u = [](double x) { return std::fabs(x); };
    if (id == "sqrt") u = [](double x) { return std::sqrt(x); };
    if (id == "exp2") u = [](double x) { return std::exp2(x); };
    if (id == "log2") u = [](double x) { return std::log2(x); };
    if (id == "sign") u = [](double x) { return static_cast<double>((x > 0) - (x < 0)); };
    if (u) {
      want(1);
      Fn a = args[0];
      return [u, a](const Index& i) { return u(a(i)); };
    }
    using B = double (*)(double, double);
    B b = nullptr;
    if (id == "pow") b = [](double x, double y) { return std::pow(x, y); };
    if (id == "min") b = [](double x, double y) { return std::min(x, y); };
    if (id == "max") b = [](double x, double y) { return std::max(x, y); };
    if (b) {
      want(2);
      Fn x = args[0], y = args[1];
      return [b, x, y](const Index& i) { return b(x(i), y(i)); };
    }
    fail("unknown function '" + id + "'");
  }

  Fn atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Fn f = expr();
      if (!eat(')')) fail("expected ')'");
      return f;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = std::stod(s_.substr(pos_), &used);
      pos_ += used;
      return [v](const Index&) { return v; };
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t st = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string id = s_.substr(st, pos_ - st);
      if (eat('(')) return call(id);
      return variable(id);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

IndexExpr expr_of(const nlohmann::json& j) {
  if (j.is_number()) return IndexExpr::parse(nlohmann::json(j.get<double>()).dump());
  if (j.is_string()) return IndexExpr::parse(j.get<std::string>());
  throw SchemaError("expression must be a number or a string");
}

}  // namespace

IndexExpr IndexExpr::parse(const std::string& text) {
  IndexExpr e;
  e.text_ = text;
  e.fn_ = Parser(e.text_).parse();
  return e;
}

AffineCovering custom_covering_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("custom covering must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& k = it.key();
    if (k != "dimension" && k != "indices" && k != "T" && k != "b" && k != "base_set" && k != "tightness")
      throw SchemaError("unknown custom covering field '" + k + "'");
  }
  if (!j.contains("dimension") || !j["dimension"].is_number_integer()) throw SchemaError("missing 'dimension'");
  int d = j["dimension"].get<int>();
  if (d < 1 || d > 8) throw SchemaError("dimension must lie in [1, 8]");
  if (!j.contains("indices") || !j["indices"].is_string()) throw SchemaError("missing 'indices'");
  if (!j.contains("T")) throw SchemaError("missing 'T'");
  if (!j.contains("base_set")) throw SchemaError("missing 'base_set'");

  std::vector<IndexExpr> t;
  bool scalar = !j["T"].is_array();
  if (scalar) {
    t.push_back(expr_of(j["T"]));
  } else {
    if (j["T"].size() != static_cast<std::size_t>(d)) throw SchemaError("T needs d rows");
    for (const auto& row : j["T"]) {
      if (!row.is_array() || row.size() != static_cast<std::size_t>(d)) throw SchemaError("T needs d columns");
      for (const auto& e : row) t.push_back(expr_of(e));
    }
  }
  std::vector<IndexExpr> b;
  if (j.contains("b")) {
    if (!j["b"].is_array() || j["b"].size() != static_cast<std::size_t>(d)) throw SchemaError("b needs d entries");
    for (const auto& e : j["b"]) b.push_back(expr_of(e));
  }
  BaseSet base = base_set_from_json(j["base_set"], d);

  AffineCovering cov;
  cov.name = "custom";
  cov.dimension = d;
  cov.indices = index_scheme_from_name(j["indices"].get<std::string>(), d);
  cov.base_radius = sup_norm(base);
  cov.generate = [d, t, b, scalar, base](const Index& i) {
    Mat m(d, d);
    if (scalar) {
      m = Mat::Identity(d, d) * t[0](i);
    } else {
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) m(r, c) = t[static_cast<std::size_t>(r * d + c)](i);
    }
    Vec v = Vec::Zero(d);
    for (std::size_t r = 0; r < b.size(); ++r) v(static_cast<int>(r)) = b[r](i);
    return Element{i, m, v, base};
  };
  if (j.contains("tightness")) {
    const auto& tj = j["tightness"];
    if (!tj.is_object() || !tj.contains("eps") || !tj.contains("center")) throw SchemaError("tightness needs eps, center");
    double eps = tj["eps"].get<double>();
    std::vector<IndexExpr> c;
    if (!tj["center"].is_array() || tj["center"].size() != static_cast<std::size_t>(d))
      throw SchemaError("tightness center needs d entries");
    for (const auto& e : tj["center"]) c.push_back(expr_of(e));
    cov.tightness = TightnessWitness{eps, [c, d](const Index& i) {
                                       Vec v(d);
                                       for (int r = 0; r < d; ++r) v(r) = c[static_cast<std::size_t>(r)](i);
                                       return v;
                                     }};
  }
  return cov;
}

}  // namespace decomp
