#include "bqkd/golden.hpp"

#include "bqkd/errors.hpp"

namespace bqkd {

namespace {

// Indices of the two basis states (|a> +- |b>)/sqrt2 in B1 or B2.
std::vector<int> pair_states(int d, BasisId basis, int a, int b) {
  a %= d;
  b %= d;
  for (int m = 0; m < d / 2; ++m) {
    auto [x, y] = pair_members(d, basis, m);
    if ((x == a && y == b) || (x == b && y == a)) return {2 * m, 2 * m + 1};
  }
  throw Error(ErrorCode::IndexOutOfRange, "no such pair in basis");
}

std::vector<int> kets(std::initializer_list<int> ks, int d) {
  std::vector<int> out;
  for (int k : ks) out.push_back(k % d);
  return out;
}

GoldenRow reversed(GoldenRow row) {
  std::swap(row.alice_basis, row.bob_basis);
  std::swap(row.alice_indices, row.bob_indices);
  row.table += " (reverse)";
  return row;
}

}  // namespace

std::vector<GoldenRow> golden_rows(int d) {
  std::vector<GoldenRow> rows;
  if (d < 4 || d % 2 != 0) return rows;
  const auto B0 = BasisId::B0;
  const auto B1 = BasisId::B1;
  const auto B2 = BasisId::B2;
  auto add = [&](std::string table, BasisId ab, std::vector<int> ai, BasisId bb, std::vector<int> bi,
                 std::optional<int> letter) {
    rows.push_back({std::move(table), d, ab, std::move(ai), bb, std::move(bi), letter});
  };

  if (d == 4) {
    const std::string t = "Table 1";
    add(t, B0, kets({0, 1}, d), B1, pair_states(d, B1, 0, 1), 0);
    add(t, B0, kets({2, 3}, d), B1, pair_states(d, B1, 2, 3), 1);
    add(t, B0, kets({0, 3}, d), B2, pair_states(d, B2, 0, 3), 1);  // printed letter 0
    add(t, B0, kets({1, 2}, d), B2, pair_states(d, B2, 1, 2), 0);  // printed letter 1
    const std::size_t n = rows.size();
    for (std::size_t i = 0; i < n; ++i) rows.push_back(reversed(rows[i]));
    add("Step 5 discard", B1, {0, 1, 2, 3}, B2, {0, 1, 2, 3}, std::nullopt);
    add("Step 5 discard", B2, {0, 1, 2, 3}, B1, {0, 1, 2, 3}, std::nullopt);
  }

  {
    const std::string t = "Table 2 (qudit)";
    add(t, B0, kets({0, 1}, d), B1, pair_states(d, B1, 0, 1), 0);
    add(t, B0, kets({d - 2, d - 1}, d), B1, pair_states(d, B1, d - 2, d - 1), d / 2 - 1);
    add(t, B0, kets({1, 2}, d), B2, pair_states(d, B2, 1, 2), 0);
    add(t, B0, kets({d - 1, 0}, d), B2, pair_states(d, B2, d - 1, 0), d / 2 - 1);
  }

  if (d == 6) {
    const std::string a = "Table 6a";
    add(a, B0, {0, 1}, B1, pair_states(d, B1, 0, 1), 0);
    add(a, B0, {2, 3}, B1, pair_states(d, B1, 2, 3), 1);
    add(a, B0, {4, 5}, B1, pair_states(d, B1, 4, 5), 2);
    add(a, B0, {1, 2}, B2, pair_states(d, B2, 1, 2), 0);
    add(a, B0, {3, 4}, B2, pair_states(d, B2, 3, 4), 1);
    add(a, B0, {5, 0}, B2, pair_states(d, B2, 5, 0), 2);
    const std::string b = "Table 6b";
    add(b, B1, pair_states(d, B1, 0, 1), B2, pair_states(d, B2, 1, 2), 0);
    add(b, B1, pair_states(d, B1, 0, 1), B2, pair_states(d, B2, 5, 0), std::nullopt);
    add(b, B1, pair_states(d, B1, 2, 3), B2, pair_states(d, B2, 1, 2), std::nullopt);
    add(b, B1, pair_states(d, B1, 2, 3), B2, pair_states(d, B2, 3, 4), std::nullopt);
    add(b, B1, pair_states(d, B1, 4, 5), B2, pair_states(d, B2, 3, 4), 1);
    add(b, B1, pair_states(d, B1, 4, 5), B2, pair_states(d, B2, 5, 0), std::nullopt);
  }

  if (d % 4 == 0 && d >= 8) {
    const std::string t = "Table 7a";
    add(t, B1, pair_states(d, B1, 0, 1), B2, pair_states(d, B2, d - 1, 0), 0);
    add(t, B1, pair_states(d, B1, 0, 1), B2, pair_states(d, B2, 1, 2), 0);
    add(t, B1, pair_states(d, B1, 2, 3), B2, pair_states(d, B2, 1, 2), std::nullopt);
    add(t, B1, pair_states(d, B1, 2, 3), B2, pair_states(d, B2, 3, 4), std::nullopt);
    add(t, B1, pair_states(d, B1, 4, 5), B2, pair_states(d, B2, 3, 4), 1);
    add(t, B1, pair_states(d, B1, 4, 5), B2, pair_states(d, B2, 5, 6), 1);
    add(t, B1, pair_states(d, B1, 6, 7), B2, pair_states(d, B2, 5, 6), std::nullopt);
    add(t, B1, pair_states(d, B1, 6, 7), B2, pair_states(d, B2, 7, 8), std::nullopt);
    add(t, B1, pair_states(d, B1, d - 4, d - 3), B2, pair_states(d, B2, d - 5, d - 4), d / 4 - 1);
    add(t, B1, pair_states(d, B1, d - 4, d - 3), B2, pair_states(d, B2, d - 3, d - 2), d / 4 - 1);
    add(t, B1, pair_states(d, B1, d - 2, d - 1), B2, pair_states(d, B2, d - 3, d - 2), std::nullopt);
    add(t, B1, pair_states(d, B1, d - 2, d - 1), B2, pair_states(d, B2, d - 1, 0), std::nullopt);
  }

  if (d % 4 == 2) {
    // The printed top letter "d/4 - 1" is not an integer here; the surviving
    // letters are 0..(d-2)/4.
    const std::string t = "Table 7b";
    const int top = (d - 2) / 4;
    add(t, B1, pair_states(d, B1, 0, 1), B2, pair_states(d, B2, d - 1, 0), std::nullopt);
    add(t, B1, pair_states(d, B1, 0, 1), B2, pair_states(d, B2, 1, 2), 0);
    add(t, B1, pair_states(d, B1, 2, 3), B2, pair_states(d, B2, 1, 2), std::nullopt);
    add(t, B1, pair_states(d, B1, 2, 3), B2, pair_states(d, B2, 3, 4), std::nullopt);
    if (d >= 10) {
      add(t, B1, pair_states(d, B1, 4, 5), B2, pair_states(d, B2, 3, 4), 1);
      add(t, B1, pair_states(d, B1, 4, 5), B2, pair_states(d, B2, 5, 6), 1);
      add(t, B1, pair_states(d, B1, 6, 7), B2, pair_states(d, B2, 5, 6), std::nullopt);
      add(t, B1, pair_states(d, B1, 6, 7), B2, pair_states(d, B2, 7, 8), std::nullopt);
    }
    add(t, B1, pair_states(d, B1, d - 4, d - 3), B2, pair_states(d, B2, d - 5, d - 4), std::nullopt);
    add(t, B1, pair_states(d, B1, d - 4, d - 3), B2, pair_states(d, B2, d - 3, d - 2), std::nullopt);
    add(t, B1, pair_states(d, B1, d - 2, d - 1), B2, pair_states(d, B2, d - 3, d - 2), top);
    add(t, B1, pair_states(d, B1, d - 2, d - 1), B2, pair_states(d, B2, d - 1, 0), std::nullopt);
  }
  return rows;
}

std::vector<RuleViolation> check_golden(int d, const SiftRule& rule) {
  const auto family = build_bases(d);
  std::vector<RuleViolation> out;
  for (const auto& row : golden_rows(d)) {
    for (int ai : row.alice_indices) {
      const auto& state = family.get(row.alice_basis).vectors[static_cast<std::size_t>(ai)];
      const auto probs = born_probabilities(state, family.get(row.bob_basis));
      for (int bi : row.bob_indices) {
        // Rows list Bob's possible post-measurement states; skip unreachable combinations.
        if (probs[static_cast<std::size_t>(bi)] <= 1e-12) continue;
        const auto views = rule(d, row.alice_basis, ai, row.bob_basis, bi);
        bool ok = true;
        if (row.letter) {
          ok = views.kept() && views.alice.symbol == *row.letter && views.bob.symbol == *row.letter;
        } else {
          ok = !views.alice.is_symbol() && !views.bob.is_symbol();
        }
        if (!ok) {
          out.push_back({d, row.alice_basis, ai, row.bob_basis, bi,
                         row.table + ": expected " + (row.letter ? std::to_string(*row.letter) : "⊥") +
                             ", got alice " + describe(views.alice) + " bob " + describe(views.bob)});
        }
      }
    }
  }
  return out;
}

}  // namespace bqkd
