#include "bqkd/key_rules.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "bqkd/errors.hpp"

namespace bqkd {

namespace {


void check_dim(int d) {
  if (d < 4 || d % 2 != 0) {
    throw Error(ErrorCode::UnsupportedDimension, "d = " + std::to_string(d) + " (need even d >= 4)");
  }
}

void check_index(int d, int k) {
  if (k < 0 || k >= d) throw Error(ErrorCode::IndexOutOfRange, "index " + std::to_string(k));
}

void check_protocol_basis(BasisId b) {
  if (b == BasisId::Fourier) throw Error(ErrorCode::IndexOutOfRange, "Fourier basis is baseline-only");
}

// Pair index of a basis state: B1/B2 index 2m+s lies in pair m.
int own_pair(int index) { return index / 2; }

}  // namespace

std::string describe(const SiftOutcome& s) {
  if (!s.is_symbol()) return "⊥";
  return std::to_string(s.symbol) + "/" + std::to_string(s.alphabet);
}

int cross_superposition_alphabet(int d) {
  check_dim(d);
  if (d == 4) return 1;
  return d % 4 == 0 ? d / 4 : (d + 2) / 4;
}

SiftOutcome sender_view(int d, BasisId sb, int si, BasisId rb) {
  check_dim(d);
  check_index(d, si);
  check_protocol_basis(sb);
  check_protocol_basis(rb);
  if (sb == rb) return SiftOutcome::key(si, d);
  if (sb == BasisId::B0) return SiftOutcome::key(pair_of(d, rb, si), d / 2);
  if (rb == BasisId::B0) return SiftOutcome::key(own_pair(si), d / 2);
  // B1 x B2
  if (d == 4) return SiftOutcome::discard();
  const int m = own_pair(si);
  if (m % 2 != 0) return SiftOutcome::discard();
  return SiftOutcome::key(m / 2, cross_superposition_alphabet(d));
}

SiftOutcome receiver_view(int d, BasisId sb, BasisId rb, int ro) {
  check_dim(d);
  check_index(d, ro);
  check_protocol_basis(sb);
  check_protocol_basis(rb);
  if (sb == rb) return SiftOutcome::key(ro, d);
  if (rb == BasisId::B0) return SiftOutcome::key(pair_of(d, sb, ro), d / 2);
  if (sb == BasisId::B0) return SiftOutcome::key(own_pair(ro), d / 2);
  if (d == 4) return SiftOutcome::discard();
  const int half = d / 2;
  const int mp = own_pair(ro);
  const bool wraps = d % 4 == 2;
  int m = 0;
  if (sb == BasisId::B1) {
    // Sender pair m reaches receiver B2 pairs m-1 and m, so m is in {m', m'+1}.
    if (wraps && mp == half - 1) return SiftOutcome::discard();
    m = mp % 2 == 0 ? mp : (mp + 1) % half;
  } else {
    // Sender B2 pair m reaches receiver B1 pairs m and m+1, so m is in {m'-1, m'}.
    if (wraps && mp == 0) return SiftOutcome::discard();
    m = mp % 2 == 0 ? mp : mp - 1;
  }
  return SiftOutcome::key(m / 2, cross_superposition_alphabet(d));
}

SiftViews sift_symbol(int d, BasisId ab, int ai, BasisId bb, int bi) {
  if (d % 2 != 0) throw Error(ErrorCode::UnsupportedDimension, "odd d = " + std::to_string(d));
  auto a = sender_view(d, ab, ai, bb);
  auto b = receiver_view(d, ab, bb, bi);
  if (!a.is_symbol() || !b.is_symbol()) return {SiftOutcome::discard(), SiftOutcome::discard()};
  return {a, b};
}

SiftOutcome bsqkd_symbol(int d, BasisId ab, int ai, bool measured, int bo) {
  check_dim(d);
  check_index(d, ai);
  check_protocol_basis(ab);
  if (!measured) return SiftOutcome::discard();
  check_index(d, bo);
  if (ab == BasisId::B0) return SiftOutcome::key(bo, d);
  return SiftOutcome::key(pair_of(d, ab, bo), d / 2);
}

SiftOutcome bsqkd_alice_symbol(int d, BasisId ab, int ai, bool measured) {
  check_dim(d);
  check_index(d, ai);
  check_protocol_basis(ab);
  if (!measured) return SiftOutcome::discard();
  if (ab == BasisId::B0) return SiftOutcome::key(ai, d);
  return SiftOutcome::key(own_pair(ai), d / 2);
}

SiftViews bb84_symbol(int d, BasisId ab, int ai, BasisId bb, int bi) {
  check_index(d, ai);
  check_index(d, bi);
  if (ab != bb) return {};
  return {SiftOutcome::key(ai, d), SiftOutcome::key(bi, d)};
}

SiftViews sqkd07_symbol(int d, BasisId ab, int ai, bool measured, int bo) {
  check_index(d, ai);
  if (!measured || ab != BasisId::B0) return {};
  check_index(d, bo);
  return {SiftOutcome::key(ai, d), SiftOutcome::key(bo, d)};
}

std::string RuleViolation::describe() const {
  std::ostringstream os;
  os << "d=" << d << " alice=" << to_string(alice_basis) << "[" << alice_index << "] bob="
     << to_string(bob_basis) << "[" << bob_outcome << "]: " << reason;
  return os.str();
}

std::vector<RuleViolation> check_unambiguity(int d, const SiftRule& rule) {
  const auto family = build_bases(d);
  const std::array<BasisId, 3> bases{BasisId::B0, BasisId::B1, BasisId::B2};
  constexpr double kReachable = 1e-12;
  std::vector<RuleViolation> out;

  for (BasisId ab : bases) {
    for (BasisId bb : bases) {
      // overlap[ai][bo] = Born probability of outcome bo given state ai.
      std::vector<std::vector<double>> overlap;
      for (const auto& v : family.get(ab).vectors) overlap.push_back(born_probabilities(v, family.get(bb)));

      for (int ai = 0; ai < d; ++ai) {
        for (int bo = 0; bo < d; ++bo) {
          if (overlap[static_cast<std::size_t>(ai)][static_cast<std::size_t>(bo)] <= kReachable) continue;
          auto report = [&](std::string why) { out.push_back({d, ab, ai, bb, bo, std::move(why)}); };
          const auto views = rule(d, ab, ai, bb, bo);
          if (views.alice.is_symbol() != views.bob.is_symbol()) {
            report("one view kept, the other discarded");
            continue;
          }
          if (!views.kept()) continue;
          if (views.alice.symbol != views.bob.symbol || views.alice.alphabet != views.bob.alphabet) {
            report("views disagree: alice " + describe(views.alice) + " bob " + describe(views.bob));
            continue;
          }
          if (views.bob.symbol < 0 || views.bob.symbol >= views.bob.alphabet) {
            report("symbol outside its alphabet");
            continue;
          }
          // Every kept sender state Bob's outcome is compatible with must decode the same way.
          std::set<int> candidates;
          for (int other = 0; other < d; ++other) {
            if (overlap[static_cast<std::size_t>(other)][static_cast<std::size_t>(bo)] <= kReachable) continue;
            const auto alt = rule(d, ab, other, bb, bo);
            if (alt.kept()) candidates.insert(alt.alice.symbol);
          }
          if (candidates.size() != 1) {
            report("outcome compatible with " + std::to_string(candidates.size()) + " kept sender symbols");
          }
        }
      }
    }
  }
  return out;
}

}  // namespace bqkd
