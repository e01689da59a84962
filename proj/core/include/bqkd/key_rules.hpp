#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bqkd/qudit.hpp"

namespace bqkd {

/// One party's sifting result for a round.
struct SiftOutcome {
  enum class Kind { Symbol, Discard };

  Kind kind = Kind::Discard;
  int symbol = 0;
  int alphabet = 0;

  static SiftOutcome discard() { return {}; }
  static SiftOutcome key(int symbol, int alphabet) { return {Kind::Symbol, symbol, alphabet}; }

  bool is_symbol() const noexcept { return kind == Kind::Symbol; }
  bool operator==(const SiftOutcome&) const = default;
};

struct SiftViews {
  SiftOutcome alice;
  SiftOutcome bob;

  bool kept() const noexcept { return alice.is_symbol() && bob.is_symbol(); }
  bool operator==(const SiftViews&) const = default;
};

std::string describe(const SiftOutcome& s);

/// Alphabet of the B1 x B2 classes: 1 for d = 4, d/4 for d = 4n, (d+2)/4 for d = 4n+2.
int cross_superposition_alphabet(int d);

// The two halves of the bQKD rule. The sender prepared the state, the
// receiver measured it. Each side only uses its own index plus public data.

/// Sender-side view. Discards odd pair indices in the B1 x B2 classes (all of
/// them when d = 4).
SiftOutcome sender_view(int d, BasisId sender_basis, int sender_index, BasisId receiver_basis);

/// Receiver-side view. For d = 4n+2 the wrap-around outcome pair of the
/// receiver's basis is discarded: B2 pair (d-1, 0), or B1 pair (0, 1).
SiftOutcome receiver_view(int d, BasisId sender_basis, BasisId receiver_basis, int receiver_outcome);

/// Full bQKD rule for a round. A discard on either side discards both views.
/// Throws UnsupportedDimension for odd d and IndexOutOfRange for bad indices.
SiftViews sift_symbol(int d, BasisId alice_basis, int alice_index, BasisId bob_basis, int bob_index);

/// Bob's view of a bSQKD round. Reflect rounds are discarded.
SiftOutcome bsqkd_symbol(int d, BasisId alice_basis, int alice_index, bool bob_measured, int bob_outcome);

/// Alice's view of a bSQKD round: her own index (B0) or pair index (B1/B2).
SiftOutcome bsqkd_alice_symbol(int d, BasisId alice_basis, int alice_index, bool bob_measured);

/// Two-basis qudit BB84 over {B0, Fourier}: matched bases keep the index.
SiftViews bb84_symbol(int d, BasisId alice_basis, int alice_index, BasisId bob_basis, int bob_index);

/// SQKD07 recap: measured rounds where Alice used the computational basis.
SiftViews sqkd07_symbol(int d, BasisId alice_basis, int alice_index, bool bob_measured, int bob_outcome);

using SiftRule = std::function<SiftViews(int, BasisId, int, BasisId, int)>;

struct RuleViolation {
  int d;
  BasisId alice_basis;
  int alice_index;
  BasisId bob_basis;
  int bob_outcome;
  std::string reason;

  std::string describe() const;
};

/// Exhaustive check over every (alice basis/index, bob basis/outcome) with
/// nonzero Born probability: both views must agree, and every kept sender
/// state compatible with Bob's outcome must map to the symbol Bob decodes.
std::vector<RuleViolation> check_unambiguity(int d, const SiftRule& rule = sift_symbol);

}  // namespace bqkd
