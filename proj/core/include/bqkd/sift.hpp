#pragma once

#include <map>
#include <vector>

#include "bqkd/records.hpp"

namespace bqkd {

// Per-protocol sifting rules. One-way protocols: Alice prepares, Bob measures.
SiftOutcome one_way_alice_view(Protocol p, int d, BasisId ab, int ai, BasisId bb);
SiftOutcome one_way_bob_view(Protocol p, int d, BasisId ab, BasisId bb, int bo);
SiftViews one_way_views(Protocol p, int d, BasisId ab, int ai, BasisId bb, int bo);

// Two-way protocols: Bob measured in B0 or reflected.
SiftOutcome two_way_alice_view(Protocol p, int d, BasisId ab, int ai, bool measured);
SiftOutcome two_way_bob_view(Protocol p, int d, BasisId ab, bool measured, int bo);
SiftViews two_way_views(Protocol p, int d, BasisId ab, int ai, bool measured, int bo);

/// Views for a completed record (its sift field is ignored).
SiftViews record_views(const RoundRecord& r, int d);

/// Whether a round can be publicly compared: key-capable rounds, plus every
/// reflect round in the two-way protocols.
bool checkable(const RoundRecord& r);

/// Outcome of comparing a checkable round. One-way: the two symbols differ.
/// Reflect: Alice's return differs from what she sent. Measured: Bob's
/// outcome or Alice's return left the sent state (B0) or its pair (B1/B2).
bool check_error(const RoundRecord& r, int d);

/// Sorted uniform subset of size round(fraction * candidates.size()).
std::vector<int> select_check_set(const std::vector<int>& candidates, double fraction, Rng& rng);

struct ClassStats {
  long checked = 0;
  long errors = 0;

  bool operator==(const ClassStats&) const = default;
  double rate() const { return checked == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(checked); }
};

struct SiftResult {
  /// Kept rounds outside the check set, in round order.
  std::vector<int> key_rounds;
  std::vector<SiftOutcome> alice_key;
  std::vector<SiftOutcome> bob_key;
  std::vector<int> check_rounds;
  std::map<RoundClass, ClassStats> qber_by_class;
  bool abort = false;
};

/// Recomputes key streams and per-class check statistics from finished
/// records; the check set is taken from the records' in_check_set flags.
SiftResult sift(const std::vector<RoundRecord>& records, const RunConfig& cfg);

/// True when some class's check error rate exceeds the threshold.
bool should_abort(const std::map<RoundClass, ClassStats>& qber, double threshold);

}  // namespace bqkd
