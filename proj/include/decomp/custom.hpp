#pragma once

#include <functional>
#include <memory>
#include <string>

#include "json.hpp"

#include "decomp/covering.hpp"

namespace decomp {

// Arithmetic over the index components: numbers, n = i0, m = i1, i0..i9, norm (Euclidean norm of the index), pi,
// + - * / ^, and abs sqrt exp2 log2 pow min max sign.
class IndexExpr {
 public:
  static IndexExpr parse(const std::string& text);  // throws SchemaError
  double operator()(const Index& i) const { return fn_(i); }
  const std::string& text() const { return text_; }

 private:
  std::function<double(const Index&)> fn_;
  std::string text_;
};

// {"dimension", "indices", "T", "b"?, "base_set", "tightness"?: {"eps", "center"}}.
// T is a d x d array of expressions or a single expression (scalar times identity).
AffineCovering custom_covering_from_json(const nlohmann::json& j);

}  // namespace decomp
