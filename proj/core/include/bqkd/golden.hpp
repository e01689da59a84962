#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bqkd/key_rules.hpp"

namespace bqkd {

/// One published key-generation table row: every listed Alice state against
/// every listed Bob post-measurement state yields `letter` (nullopt = discard).
struct GoldenRow {
  std::string table;
  int d;
  BasisId alice_basis;
  std::vector<int> alice_indices;
  BasisId bob_basis;
  std::vector<int> bob_indices;
  std::optional<int> letter;
};

/// Rows of the published tables that apply to dimension d. The ququart B2
/// rows are translated to the general pair labeling: pair (0,3) is letter 1
/// and pair (1,2) is letter 0.
std::vector<GoldenRow> golden_rows(int d);

/// Checks both views of `rule` against every golden row for d.
std::vector<RuleViolation> check_golden(int d, const SiftRule& rule = sift_symbol);

}  // namespace bqkd
