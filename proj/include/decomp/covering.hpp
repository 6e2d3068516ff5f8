#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "decomp/geometry.hpp"

namespace decomp {

using Index = std::vector<std::int64_t>;

std::string index_str(const Index& i);

struct Element {
  Index index;
  Mat T;
  Vec b;
  BaseSet base;
};

// Countable index set with nested finite windows.
class IndexScheme {
 public:
  virtual ~IndexScheme() = default;
  virtual std::string name() const = 0;
  virtual std::size_t count(int radius) const = 0;
  // Deterministic, duplicate-free, and window(r) is a subset of window(r + 1).
  virtual std::vector<Index> enumerate(int radius) const = 0;
};

std::shared_ptr<const IndexScheme> integer_line();               // Z, |n| <= R
std::shared_ptr<const IndexScheme> natural_line();               // N0, n <= R
std::shared_ptr<const IndexScheme> full_lattice(int d);          // Z^d, |k|_inf <= R
std::shared_ptr<const IndexScheme> punctured_lattice(int d);     // Z^d \ {0}, 0 < |k|_inf <= max(R, 1)
std::shared_ptr<const IndexScheme> signed_lattice(int d);        // Z^d x {+-1}^d
std::shared_ptr<const IndexScheme> shearlet_cone_indices();      // {low} + (n, m, eps, delta), n <= R, |m| <= 2^n
std::shared_ptr<const IndexScheme> shearlet_group_indices();     // (n, m, eps) in Z^2 x {+-1}, |n|, |m| <= R
std::shared_ptr<const IndexScheme> singleton();

// Index of the low-frequency set in the shearlet cone scheme.
inline const Index kShearletLow{-1, 0, 0, 0};

std::shared_ptr<const IndexScheme> index_scheme_from_name(const std::string& name, int dim);

struct TightnessWitness {
  double eps = 0;
  std::function<Vec(const Index&)> center;
};

struct AffineCovering {
  std::string name;
  int dimension = 1;
  std::shared_ptr<const IndexScheme> indices;
  std::function<Element(const Index&)> generate;
  double base_radius = 0;  // every Q_i' lies in B_R(0)
  std::optional<TightnessWitness> tightness;
  // Superset of the neighbours of an index, known in closed form; empty for custom coverings.
  std::function<std::vector<Index>(const Index&)> analytic_neighbors;
};

std::size_t window_cap();  // DECOMP_EMBED_MAX_WINDOW or 10^6

std::vector<Element> enumerate_window(const AffineCovering& cov, int radius);

struct NeighborStructure {
  std::vector<Index> window;
  std::vector<std::vector<std::size_t>> adjacency;  // sorted positions into window
  std::size_t n_hat = 0;
  double c_hat = 0;
  std::size_t conservative_pairs = 0;
};

NeighborStructure neighbors(const AffineCovering& cov, const std::vector<Element>& window);

struct CertificateReport {
  std::size_t window_size = 0;
  std::size_t n_hat = 0;
  double c_hat = 0;
  double r_hat = 0;
  std::optional<bool> tightness_ok;
  std::vector<Index> invertibility_violations;
  std::size_t conservative_pairs = 0;
};

CertificateReport certify_constants(const AffineCovering& cov, const std::vector<Element>& window,
                                    const NeighborStructure& nb);

struct ModerateReport {
  double c_hat = 0;       // at the requested radius
  double c_hat_next = 0;  // at radius + 1
  bool ok = false;
  bool analytic_neighbors = false;
};

// log2_weight is evaluated per index; C_{u,Q} = max over neighbours of u_i / u_j.
ModerateReport check_moderate(const AffineCovering& cov, const std::function<double(const Index&)>& log2_weight,
                              int radius);

struct SurrogateReport {
  std::size_t count = 0;
  double min_ratio = 0;
  double max_ratio = 0;
  double spread = 0;
};

// (|b_i| + ||T_i||) / sup_{x in Q_i} |x| over the window.
SurrogateReport norm_surrogate_check(const AffineCovering& cov, const std::vector<Element>& window);

}  // namespace decomp
