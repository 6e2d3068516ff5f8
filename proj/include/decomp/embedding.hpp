#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "decomp/exponent.hpp"
#include "decomp/families.hpp"
#include "decomp/outcome.hpp"
#include "decomp/seqspace.hpp"

namespace decomp {

enum class TargetKind { Sobolev, BV, Cb };

struct Target {
  TargetKind kind = TargetKind::Sobolev;
  int k = 0;
  Exponent q = Exponent(1);  // Sobolev only
};

std::string target_str(const Target& t);
Target target_from_json(const nlohmann::json& j);  // {"kind": "sobolev"|"bv"|"cb", "k", "q"}
nlohmann::json target_to_json(const Target& t);

struct Evidence {
  std::string id;
  std::string anchor;
  bool holds = false;
  std::string detail;
};

struct OracleRecord {
  std::string id;
  bool decided_member = false;
  TailKind oracle = TailKind::Inconclusive;
  bool disagrees = false;
};

struct Verdict {
  Outcome outcome = Outcome::Undetermined;
  std::vector<Evidence> evidence;
  std::optional<std::string> gap_note;
  std::vector<OracleRecord> oracle;  // filled with oracle_check
};

nlohmann::ordered_json verdict_to_json(const Verdict& v);  // keys in schema order

struct DecideOptions {
  bool refine = false;
  bool oracle_check = false;
  // Overrides the family default; an empty vector disables the I0 conditions.
  std::optional<std::vector<std::uint8_t>> I0;
};

// Anchor label for an evidence id prefix-free key, e.g. "w_q_over_u".
const std::string& anchor_of(const std::string& key);

Verdict decide_sobolev(const FamilySpec& spec, const Exponent& p, const Exponent& r, int k, const Exponent& q,
                       const DecideOptions& opt = {});
Verdict decide_bv(const FamilySpec& spec, const Exponent& p, const Exponent& r, int k, const DecideOptions& opt = {});
Verdict decide_cb(const FamilySpec& spec, const Exponent& p, const Exponent& r, int k, const DecideOptions& opt = {});
Verdict decide(const FamilySpec& spec, const Exponent& p, const Exponent& r, const Target& t,
               const DecideOptions& opt = {});

// Golden outcome for a target, mapped to the Sobolev closed forms.
Outcome golden_for(const FamilySpec& spec, const Exponent& p, const Exponent& r, const Target& t);

}  // namespace decomp
