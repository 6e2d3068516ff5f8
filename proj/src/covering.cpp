#include "decomp/covering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>

#include "decomp/errors.hpp"

namespace decomp {

std::string index_str(const Index& i) {
  std::string s = "(";
  for (std::size_t k = 0; k < i.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(i[k]);
  }
  return s + ")";
}

namespace {

void check_radius(int radius) {
  if (radius < 0) throw InvalidParams("window radius must be >= 0");
}

// Odometer over the box [-r, r]^d in lexicographic order.
template <typename F>
void for_box(int d, std::int64_t r, F&& f) {
  Index k(d, -r);
  if (d == 0) {
    f(k);
    return;
  }
  while (true) {
    f(k);
    int pos = d - 1;
    while (pos >= 0 && k[pos] == r) {
      k[pos] = -r;
      --pos;
    }
    if (pos < 0) return;
    ++k[pos];
  }
}

double ipow(double base, int e) {
  double r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

std::size_t to_count(double c) {
  if (c > 1e18) return static_cast<std::size_t>(1e18);
  return static_cast<std::size_t>(c);
}

class IntegerLine : public IndexScheme {
 public:
  std::string name() const override { return "Z"; }
  std::size_t count(int r) const override { return 2 * static_cast<std::size_t>(r) + 1; }
  std::vector<Index> enumerate(int r) const override {
    check_radius(r);
    std::vector<Index> out;
    for (std::int64_t n = -r; n <= r; ++n) out.push_back({n});
    return out;
  }
};

class NaturalLine : public IndexScheme {
 public:
  std::string name() const override { return "N0"; }
  std::size_t count(int r) const override { return static_cast<std::size_t>(r) + 1; }
  std::vector<Index> enumerate(int r) const override {
    check_radius(r);
    std::vector<Index> out;
    for (std::int64_t n = 0; n <= r; ++n) out.push_back({n});
    return out;
  }
};

class FullLattice : public IndexScheme {
 public:
  explicit FullLattice(int d) : d_(d) {}
  std::string name() const override { return "Z^" + std::to_string(d_); }
  std::size_t count(int r) const override { return to_count(ipow(2.0 * r + 1, d_)); }
  std::vector<Index> enumerate(int r) const override {
    check_radius(r);
    std::vector<Index> out;
    for_box(d_, r, [&](const Index& k) { out.push_back(k); });
    return out;
  }

 private:
  int d_;
};

class PuncturedLattice : public IndexScheme {
 public:
  explicit PuncturedLattice(int d) : d_(d) {}
  std::string name() const override { return "Z^" + std::to_string(d_) + "\\0"; }
  std::size_t count(int r) const override { return to_count(ipow(2.0 * std::max(r, 1) + 1, d_) - 1); }
  std::vector<Index> enumerate(int r) const override {
    check_radius(r);
    std::vector<Index> out;
    for_box(d_, std::max(r, 1), [&](const Index& k) {
      if (std::any_of(k.begin(), k.end(), [](std::int64_t v) { return v != 0; })) out.push_back(k);
    });
    return out;
  }

 private:
  int d_;
};

class SignedLattice : public IndexScheme {
 public:
  explicit SignedLattice(int d) : d_(d) {}
  std::string name() const override { return "Z^" + std::to_string(d_) + "x{+-1}^" + std::to_string(d_); }
  std::size_t count(int r) const override { return to_count(ipow(2.0 * r + 1, d_) * ipow(2.0, d_)); }
  std::vector<Index> enumerate(int r) const override {
    check_radius(r);
    std::vector<Index> out;
    for_box(d_, r, [&](const Index& k) {
      for (int mask = 0; mask < (1 << d_); ++mask) {
        Index i = k;
        for (int l = d_ - 1; l >= 0; --l) i.push_back((mask >> l) & 1 ? 1 : -1);
        out.push_back(i);
      }
    });
    return out;
  }

 private:
  int d_;
};

class ShearletCone : public IndexScheme {
 public:
  std::string name() const override { return "shearlet_cone"; }
  std::size_t count(int r) const override {
    double c = 1;
    for (int n = 0; n <= r; ++n) c += 4 * (std::ldexp(2.0, n) + 1);
    return to_count(c);
  }
  std::vector<Index> enumerate(int r) const override {
    check_radius(r);
    if (r > 40) throw WindowOverflow("shearlet window radius too large");
    std::vector<Index> out{kShearletLow};
    for (std::int64_t n = 0; n <= r; ++n) {
      std::int64_t mm = std::int64_t{1} << n;
      for (std::int64_t m = -mm; m <= mm; ++m)
        for (std::int64_t e : {-1, 1})
          for (std::int64_t dl : {0, 1}) out.push_back({n, m, e, dl});
    }
    return out;
  }
};

class ShearletGroup : public IndexScheme {
 public:
  std::string name() const override { return "Z^2x{+-1}"; }
  std::size_t count(int r) const override { return to_count(2 * ipow(2.0 * r + 1, 2)); }
  std::vector<Index> enumerate(int r) const override {
    check_radius(r);
    std::vector<Index> out;
    for (std::int64_t n = -r; n <= r; ++n)
      for (std::int64_t m = -r; m <= r; ++m)
        for (std::int64_t e : {-1, 1}) out.push_back({n, m, e});
    return out;
  }
};

class Singleton : public IndexScheme {
 public:
  std::string name() const override { return "single"; }
  std::size_t count(int) const override { return 1; }
  std::vector<Index> enumerate(int r) const override {
    check_radius(r);
    return {Index{0}};
  }
};

}  // namespace

std::shared_ptr<const IndexScheme> integer_line() { return std::make_shared<IntegerLine>(); }
std::shared_ptr<const IndexScheme> natural_line() { return std::make_shared<NaturalLine>(); }
std::shared_ptr<const IndexScheme> full_lattice(int d) { return std::make_shared<FullLattice>(d); }
std::shared_ptr<const IndexScheme> punctured_lattice(int d) { return std::make_shared<PuncturedLattice>(d); }
std::shared_ptr<const IndexScheme> signed_lattice(int d) { return std::make_shared<SignedLattice>(d); }
std::shared_ptr<const IndexScheme> shearlet_cone_indices() { return std::make_shared<ShearletCone>(); }
std::shared_ptr<const IndexScheme> shearlet_group_indices() { return std::make_shared<ShearletGroup>(); }
std::shared_ptr<const IndexScheme> singleton() { return std::make_shared<Singleton>(); }

std::shared_ptr<const IndexScheme> index_scheme_from_name(const std::string& name, int dim) {
  if (name == "single") return singleton();
  if (name == "Z" && dim >= 1) return dim == 1 ? integer_line() : full_lattice(dim);
  if (name == "N0" && dim == 1) return natural_line();
  if (name == "Z^d") return full_lattice(dim);
  if (name == "Z^d\\0" || name == "Z^d-0") return punctured_lattice(dim);
  if (name == "Z^dx{+-1}^d") return signed_lattice(dim);
  throw SchemaError("unknown index set '" + name + "'");
}

std::size_t window_cap() {
  if (const char* env = std::getenv("DECOMP_EMBED_MAX_WINDOW")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 1000000;
}

std::vector<Element> enumerate_window(const AffineCovering& cov, int radius) {
  check_radius(radius);
  std::size_t n = cov.indices->count(radius);
  if (n > window_cap())
    throw WindowOverflow("window of " + std::to_string(n) + " indices exceeds cap " + std::to_string(window_cap()));
  std::vector<Element> out;
  for (const auto& i : cov.indices->enumerate(radius)) out.push_back(cov.generate(i));
  return out;
}

NeighborStructure neighbors(const AffineCovering& cov, const std::vector<Element>& window) {
  (void)cov;
  NeighborStructure nb;
  const std::size_t n = window.size();
  nb.adjacency.assign(n, {});
  std::vector<Image> img;
  img.reserve(n);
  for (const auto& e : window) {
    nb.window.push_back(e.index);
    img.push_back(image_of(e.T, e.b, e.base));
  }
  // Sweep and prune along the first axis.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (img[a].bb_lo(0) != img[b].bb_lo(0)) return img[a].bb_lo(0) < img[b].bb_lo(0);
    return a < b;
  });
  std::vector<std::size_t> active;
  for (std::size_t i : order) {
    std::erase_if(active, [&](std::size_t j) { return img[j].bb_hi(0) < img[i].bb_lo(0); });
    for (std::size_t j : active) {
      bool boxes = true;
      for (int a = 1; a < img[i].bb_lo.size(); ++a)
        boxes = boxes && img[i].bb_lo(a) <= img[j].bb_hi(a) && img[j].bb_lo(a) <= img[i].bb_hi(a);
      if (!boxes) continue;
      Overlap o = intersect(img[i], img[j]);
      if (!o.intersects) continue;
      nb.adjacency[i].push_back(j);
      nb.adjacency[j].push_back(i);
      if (o.conservative) ++nb.conservative_pairs;
    }
    active.push_back(i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto& adj = nb.adjacency[i];
    adj.push_back(i);
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    nb.n_hat = std::max(nb.n_hat, adj.size());
    Mat inv = window[i].T.inverse();
    for (std::size_t j : adj) nb.c_hat = std::max(nb.c_hat, spectral_norm(inv * window[j].T));
  }
  return nb;
}

CertificateReport certify_constants(const AffineCovering& cov, const std::vector<Element>& window,
                                    const NeighborStructure& nb) {
  CertificateReport rep;
  rep.window_size = window.size();
  rep.n_hat = nb.n_hat;
  rep.c_hat = nb.c_hat;
  rep.conservative_pairs = nb.conservative_pairs;
  bool tight = true;
  for (const auto& e : window) {
    rep.r_hat = std::max(rep.r_hat, sup_norm(e.base));
    double norm = spectral_norm(e.T);
    double det = std::fabs(e.T.determinant());
    bool invertible = det > 0 && std::isfinite(det);
    if (invertible) {
      double cond = norm * spectral_norm(e.T.inverse());
      invertible = std::isfinite(cond) && cond < 1e14;
    }
    if (!invertible) rep.invertibility_violations.push_back(e.index);
    if (cov.tightness) tight = tight && contains_ball(e.base, cov.tightness->center(e.index), cov.tightness->eps);
  }
  if (cov.tightness) rep.tightness_ok = tight;
  return rep;
}

namespace {

double moderate_constant(const AffineCovering& cov, const std::function<double(const Index&)>& log2_weight, int radius,
                         bool analytic) {
  std::vector<Index> idx = cov.indices->enumerate(radius);
  std::map<Index, double> val;
  for (const auto& i : idx) val[i] = log2_weight(i);
  double worst = -std::numeric_limits<double>::infinity();
  if (analytic) {
    for (const auto& i : idx)
      for (const auto& j : cov.analytic_neighbors(i)) {
        auto it = val.find(j);
        if (it != val.end()) worst = std::max(worst, val[i] - it->second);
      }
  } else {
    if (cov.indices->count(radius) > window_cap()) throw WindowOverflow("moderateness window exceeds cap");
    std::vector<Element> w;
    for (const auto& i : idx) w.push_back(cov.generate(i));
    NeighborStructure nb = neighbors(cov, w);
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j : nb.adjacency[i]) worst = std::max(worst, val[idx[i]] - val[idx[j]]);
  }
  return std::exp2(worst);
}

}  // namespace

ModerateReport check_moderate(const AffineCovering& cov, const std::function<double(const Index&)>& log2_weight,
                              int radius) {
  ModerateReport rep;
  rep.analytic_neighbors = static_cast<bool>(cov.analytic_neighbors);
  rep.c_hat = moderate_constant(cov, log2_weight, radius, rep.analytic_neighbors);
  rep.c_hat_next = moderate_constant(cov, log2_weight, radius + 1, rep.analytic_neighbors);
  rep.ok = std::isfinite(rep.c_hat) && std::isfinite(rep.c_hat_next) && rep.c_hat_next <= 1.01 * rep.c_hat &&
           rep.c_hat <= 1.01 * rep.c_hat_next;
  return rep;
}

SurrogateReport norm_surrogate_check(const AffineCovering& cov, const std::vector<Element>& window) {
  if (!cov.tightness) throw MissingTightnessWitness("covering '" + cov.name + "' has no tightness witness");
  SurrogateReport rep;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& e : window) {
    double sup = image_sup_norm(image_of(e.T, e.b, e.base));
    double ratio = (e.b.norm() + spectral_norm(e.T)) / sup;
    rep.min_ratio = std::min(rep.min_ratio, ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    ++rep.count;
  }
  if (rep.count == 0) rep.min_ratio = 0;
  rep.spread = rep.min_ratio > 0 ? rep.max_ratio / rep.min_ratio : 0;
  return rep;
}

}  // namespace decomp
