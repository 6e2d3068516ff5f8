#pragma once

#include <string>

namespace decomp {

enum class Outcome { Embeds, DoesNotEmbed, Undetermined };

inline std::string outcome_str(Outcome o) {
  switch (o) {
    case Outcome::Embeds: return "Embeds";
    case Outcome::DoesNotEmbed: return "DoesNotEmbed";
    default: return "Undetermined";
  }
}

}  // namespace decomp
