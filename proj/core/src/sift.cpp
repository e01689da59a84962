#include "bqkd/sift.hpp"

#include <algorithm>
#include <cmath>

#include "bqkd/errors.hpp"

namespace bqkd {

SiftOutcome one_way_alice_view(Protocol p, int d, BasisId ab, int ai, BasisId bb) {
  if (p == Protocol::BQKD) return sender_view(d, ab, ai, bb);
  if (ab != bb) return SiftOutcome::discard();
  return SiftOutcome::key(ai, d);
}

SiftOutcome one_way_bob_view(Protocol p, int d, BasisId ab, BasisId bb, int bo) {
  if (p == Protocol::BQKD) return receiver_view(d, ab, bb, bo);
  if (ab != bb) return SiftOutcome::discard();
  return SiftOutcome::key(bo, d);
}

SiftViews one_way_views(Protocol p, int d, BasisId ab, int ai, BasisId bb, int bo) {
  if (p == Protocol::BQKD) return sift_symbol(d, ab, ai, bb, bo);
  return bb84_symbol(d, ab, ai, bb, bo);
}

SiftOutcome two_way_alice_view(Protocol p, int d, BasisId ab, int ai, bool measured) {
  if (p == Protocol::BSQKD) return bsqkd_alice_symbol(d, ab, ai, measured);
  if (!measured || ab != BasisId::B0) return SiftOutcome::discard();
  return SiftOutcome::key(ai, d);
}

SiftOutcome two_way_bob_view(Protocol p, int d, BasisId ab, bool measured, int bo) {
  if (p == Protocol::BSQKD) return bsqkd_symbol(d, ab, 0, measured, bo);
  if (!measured || ab != BasisId::B0) return SiftOutcome::discard();
  return SiftOutcome::key(bo, d);
}

SiftViews two_way_views(Protocol p, int d, BasisId ab, int ai, bool measured, int bo) {
  if (p == Protocol::BSQKD) {
    return {bsqkd_alice_symbol(d, ab, ai, measured), bsqkd_symbol(d, ab, ai, measured, bo)};
  }
  return sqkd07_symbol(d, ab, ai, measured, bo);
}

SiftViews record_views(const RoundRecord& r, int d) {
  if (is_two_way(r.protocol)) {
    return two_way_views(r.protocol, d, r.alice_basis, r.alice_index, r.measured(), r.bob_outcome.value_or(0));
  }
  return one_way_views(r.protocol, d, r.alice_basis, r.alice_index, r.bob_basis.value(), r.bob_outcome.value());
}

bool checkable(const RoundRecord& r) {
  if (is_two_way(r.protocol) && !r.measured()) return true;
  return r.sift.kept();
}

bool check_error(const RoundRecord& r, int d) {
  if (!is_two_way(r.protocol)) return r.sift.alice.symbol != r.sift.bob.symbol;
  const int ai = r.alice_index;
  const int ret = r.alice_return_outcome.value();
  if (!r.measured()) return ret != ai;
  const int bo = r.bob_outcome.value();
  if (r.alice_basis == BasisId::B0) return bo != ai || ret != ai;
  if (r.alice_basis == BasisId::Fourier) {
    throw Error(ErrorCode::IndexOutOfRange, "measured Fourier rounds are not compared");
  }
  const int pair = ai / 2;
  return pair_of(d, r.alice_basis, bo) != pair || ret / 2 != pair;
}

std::vector<int> select_check_set(const std::vector<int>& candidates, double fraction, Rng& rng) {
  const auto n = static_cast<int>(candidates.size());
  const int k = std::clamp(static_cast<int>(std::llround(fraction * n)), 0, n);
  std::vector<int> pool = candidates;
  // Partial Fisher-Yates: the first k slots end up a uniform k-subset.
  for (int i = 0; i < k; ++i) {
    const int j = i + rng.index(n - i);
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(k));
  std::sort(pool.begin(), pool.end());
  return pool;
}

bool should_abort(const std::map<RoundClass, ClassStats>& qber, double threshold) {
  for (const auto& [cls, st] : qber) {
    if (st.checked > 0 && st.rate() > threshold) return true;
  }
  return false;
}

SiftResult sift(const std::vector<RoundRecord>& records, const RunConfig& cfg) {
  SiftResult out;
  for (const auto& r : records) {
    if (r.in_check_set) {
      out.check_rounds.push_back(r.round);
      auto& st = out.qber_by_class[r.round_class()];
      ++st.checked;
      if (check_error(r, cfg.dim)) ++st.errors;
      continue;
    }
    if (r.sift.kept()) {
      out.key_rounds.push_back(r.round);
      out.alice_key.push_back(r.sift.alice);
      out.bob_key.push_back(r.sift.bob);
    }
  }
  out.abort = should_abort(out.qber_by_class, cfg.abort_qber_threshold);
  return out;
}

}  // namespace bqkd
