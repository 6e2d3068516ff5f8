#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "decomp/covering.hpp"
#include "decomp/exponent.hpp"
#include "decomp/outcome.hpp"
#include "decomp/seqspace.hpp"
#include "decomp/weights.hpp"

namespace decomp {

enum class FamilyId { HomBesov, InhomBesov, AlphaModulation, ShearletSmoothness, ShearletCoorbit, DiagonalCoorbit };

std::string family_name(FamilyId id);
FamilyId family_from_name(const std::string& name);  // throws SchemaError
const std::vector<FamilyId>& all_families();

struct FamilyParams {
  int d = 1;
  Rational s;      // Besov smoothness
  Rational alpha;  // alpha-modulation alpha, coorbit weight exponent
  Rational gamma;  // alpha-modulation weight exponent
  Rational beta;   // shearlet smoothness, coorbit weight exponent
  Rational c;      // shearlet group parameter
  std::optional<Rational> rho;  // alpha-modulation ball radius
  std::vector<Rational> alpha_vec, beta_vec;  // diagonal group
};

FamilyParams params_from_json(FamilyId id, const nlohmann::json& j);
nlohmann::json params_to_json(FamilyId id, const FamilyParams& p);

struct FamilySpec {
  FamilyId id = FamilyId::HomBesov;
  FamilyParams params;
  AffineCovering covering;
  SymbolicGeometry geometry;
  std::function<ExpPolyWeight(const Exponent& r)> space_symbolic;
  std::function<double(const Index&, const Exponent& r)> log2_space;
  std::function<std::pair<double, double>(const Exponent& r)> space_range;  // evaluator / symbolic
  std::optional<std::vector<std::uint8_t>> default_I0;
  std::string moderate_note;
};

FamilySpec instantiate(FamilyId id, const FamilyParams& params);
FamilySpec instantiate(const std::string& name, const nlohmann::json& params);

SpaceWeight space_weight(const FamilySpec& spec, const Exponent& r);

// Smoothness threshold of the sufficient characterization (the hom_besov value is the required equality).
Rational smoothness_threshold(const FamilySpec& spec, const Exponent& p, const Exponent& r, int k, const Exponent& q);

struct RefinedRules {
  bool sufficient = false;
  bool necessary = true;
  bool necessary_suffices = false;  // alpha = 0 and p = q for alpha_modulation
  std::string anchor;
  std::string detail_sufficient;
  std::string detail_necessary;
};

// Only for inhom_besov, alpha_modulation, shearlet_smoothness with q in (2, inf).
std::optional<RefinedRules> refined_criteria(const FamilySpec& spec, const Exponent& p, const Exponent& r, int k,
                                             const Exponent& q);

// Closed-form characterizations, refinements included; Sobolev target W^{k,q}.
Outcome golden_verdict(const FamilySpec& spec, const Exponent& p, const Exponent& r, int k, const Exponent& q);

}  // namespace decomp
