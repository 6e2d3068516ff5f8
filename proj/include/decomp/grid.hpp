#pragma once

#include <functional>

#include "decomp/families.hpp"

namespace decomp {

// The engine-vs-golden parameter grid for one family: exponents in {1/2, 1, 3/2, 2, 3, inf}, k in {0, 1, 2},
// smoothness parameters placed below, at and above every threshold of the closed forms.
struct GridCase {
  const FamilySpec& spec;
  Exponent p, r, q;
  int k;
};

const std::vector<Exponent>& grid_exponents();

void for_each_grid_case(FamilyId id, const std::function<void(const GridCase&)>& f);

struct GridSummary {
  std::size_t queries = 0;
  std::size_t agree = 0;
  std::size_t undetermined = 0;
  std::size_t errors = 0;
  std::vector<std::string> first_failures;
};

GridSummary run_golden_grid(FamilyId id);

}  // namespace decomp
