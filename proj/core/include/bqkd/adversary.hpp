#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bqkd/joint_state.hpp"
#include "bqkd/key_rules.hpp"

namespace bqkd {

enum class Direction { Forward, Backward };

std::string_view to_string(Direction d);

struct NoEve {};

/// Coarse measurement of a block observable; only the block structure matters.
struct SubspaceAttack {
  Partition blocks;
};

/// Measure in a basis drawn uniformly from `bases`, resend the collapsed state.
struct InterceptResend {
  std::vector<BasisId> bases;
};

/// |i>|0> -> |i>|i>.
struct EntangleMeasureCopy {};

struct GeneralEntangle {
  AncillaMap map;
};

/// Separate attacks on the Alice->Bob and Bob->Alice legs of a two-way protocol.
struct TwoWayEntangle {
  AncillaMap forward;
  AncillaMap backward;
};

using EveStrategy =
    std::variant<NoEve, SubspaceAttack, InterceptResend, EntangleMeasureCopy, GeneralEntangle, TwoWayEntangle>;

std::string strategy_name(const EveStrategy& s);
bool is_entangling(const EveStrategy& s);
bool attacks_backward(const EveStrategy& s);

/// What Eve saw on one leg of one round. `basis` is set for intercept-resend,
/// `observation` is a basis outcome or a block index; both stay empty for
/// entangling attacks.
struct EveObservation {
  int round = 0;
  Direction direction = Direction::Forward;
  std::optional<BasisId> basis;
  std::optional<int> observation;

  bool operator==(const EveObservation&) const = default;
};

struct EveLog {
  std::vector<EveObservation> entries;
};

/// Throws InvalidPartition / IndexOutOfRange / DimensionMismatch for a
/// strategy that cannot act on dimension d.
void validate_strategy(const EveStrategy& s, int d);

/// Acts on the in-flight state and appends one log entry. Intercept-resend
/// picks its basis from `family`, which must cover every configured basis.
/// Throws DirectionUnsupported for a backward call on a one-way strategy.
void eve_apply(const EveStrategy& s, Direction dir, int round, JointState& state, const BasisFamily& family,
               Rng& rng, EveLog& log);

struct EveGuess {
  std::optional<int> symbol;
  double known_bits = 0.0;
};

/// Eve's guess of Alice's key symbol once bases are public. The candidates are
/// Alice's key-capable states in her basis that could have produced Eve's
/// observation; a guess is made only when they all carry one symbol.
/// known_bits = log2(alphabet / #distinct candidate symbols).
/// `alice_view(k)` is Alice's sift outcome had she sent index k.
template <class AliceView>
EveGuess eve_guess(const EveStrategy& s, const EveObservation* obs, const BasisFamily& family, BasisId alice_basis,
                   AliceView&& alice_view);

namespace detail {
bool observation_consistent(const EveStrategy& s, const EveObservation& obs, const BasisFamily& family,
                            const StateVector& sent);
EveGuess guess_from_candidates(const std::vector<int>& symbols, int alphabet);
}  // namespace detail

template <class AliceView>
EveGuess eve_guess(const EveStrategy& s, const EveObservation* obs, const BasisFamily& family, BasisId alice_basis,
                   AliceView&& alice_view) {
  if (obs == nullptr || !obs->observation) return {};
  const auto& basis = family.get(alice_basis);
  std::vector<int> symbols;
  int alphabet = 0;
  for (int k = 0; k < basis.dim; ++k) {
    const SiftOutcome v = alice_view(k);
    if (!v.is_symbol()) continue;
    alphabet = v.alphabet;
    if (detail::observation_consistent(s, *obs, family, basis.vectors[static_cast<std::size_t>(k)])) {
      symbols.push_back(v.symbol);
    }
  }
  return detail::guess_from_candidates(symbols, alphabet);
}

}  // namespace bqkd
