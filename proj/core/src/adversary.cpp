#include "bqkd/adversary.hpp"

#include <algorithm>
#include <cmath>

#include "bqkd/errors.hpp"

namespace bqkd {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kReachable = 1e-12;

void check_map(const AncillaMap& m, int d) {
  if (m.d_travel() != d) {
    throw Error(ErrorCode::DimensionMismatch,
                "ancilla map acts on d=" + std::to_string(m.d_travel()) + ", state has d=" + std::to_string(d));
  }
}

}  // namespace

std::string_view to_string(Direction d) { return d == Direction::Forward ? "forward" : "backward"; }

std::string strategy_name(const EveStrategy& s) {
  return std::visit(overloaded{
                        [](const NoEve&) { return std::string("none"); },
                        [](const SubspaceAttack&) { return std::string("subspace"); },
                        [](const InterceptResend&) { return std::string("intercept_resend"); },
                        [](const EntangleMeasureCopy&) { return std::string("copy"); },
                        [](const GeneralEntangle&) { return std::string("general"); },
                        [](const TwoWayEntangle&) { return std::string("two_way"); },
                    },
                    s);
}

bool is_entangling(const EveStrategy& s) {
  return std::holds_alternative<EntangleMeasureCopy>(s) || std::holds_alternative<GeneralEntangle>(s) ||
         std::holds_alternative<TwoWayEntangle>(s);
}

bool attacks_backward(const EveStrategy& s) { return std::holds_alternative<TwoWayEntangle>(s); }

void validate_strategy(const EveStrategy& s, int d) {
  std::visit(overloaded{
                 [](const NoEve&) {},
                 [d](const SubspaceAttack& a) { validate_partition(a.blocks, d); },
                 [](const InterceptResend& a) {
                   if (a.bases.empty()) throw Error(ErrorCode::ConfigInvalid, "intercept-resend needs a basis");
                 },
                 [](const EntangleMeasureCopy&) {},
                 [d](const GeneralEntangle& a) { check_map(a.map, d); },
                 [d](const TwoWayEntangle& a) {
                   check_map(a.forward, d);
                   check_map(a.backward, d);
                 },
             },
             s);
}

void eve_apply(const EveStrategy& s, Direction dir, int round, JointState& state, const BasisFamily& family, Rng& rng,
               EveLog& log) {
  if (dir == Direction::Backward && !attacks_backward(s) && !std::holds_alternative<NoEve>(s)) {
    throw Error(ErrorCode::DirectionUnsupported, strategy_name(s) + " attacks only the forward leg");
  }
  if (std::holds_alternative<NoEve>(s)) return;
  EveObservation entry{round, dir, std::nullopt, std::nullopt};
  std::visit(overloaded{
                 [](const NoEve&) {},
                 [&](const SubspaceAttack& a) { entry.observation = state.project_travel(a.blocks, rng); },
                 [&](const InterceptResend& a) {
                   const BasisId b = a.bases[static_cast<std::size_t>(rng.index(static_cast<int>(a.bases.size())))];
                   entry.basis = b;
                   entry.observation = state.measure_travel(family.get(b), rng);
                 },
                 [&](const EntangleMeasureCopy&) { state.entangle(AncillaMap::copy(state.travel_dim())); },
                 [&](const GeneralEntangle& a) {
                   check_map(a.map, state.travel_dim());
                   state.entangle(a.map);
                 },
                 [&](const TwoWayEntangle& a) {
                   const AncillaMap& m = dir == Direction::Forward ? a.forward : a.backward;
                   check_map(m, state.travel_dim());
                   state.entangle(m);
                 },
             },
             s);
  log.entries.push_back(entry);
}

namespace detail {

bool observation_consistent(const EveStrategy& s, const EveObservation& obs, const BasisFamily& family,
                            const StateVector& sent) {
  if (!obs.observation) return true;
  const int o = *obs.observation;
  if (const auto* ir = std::get_if<InterceptResend>(&s)) {
    (void)ir;
    if (!obs.basis) return true;
    return born_probabilities(sent, family.get(*obs.basis))[static_cast<std::size_t>(o)] > kReachable;
  }
  if (const auto* sub = std::get_if<SubspaceAttack>(&s)) {
    double mass = 0.0;
    for (int k : sub->blocks[static_cast<std::size_t>(o)]) mass += std::norm(sent[k]);
    return mass > kReachable;
  }
  return true;
}

EveGuess guess_from_candidates(const std::vector<int>& symbols, int alphabet) {
  std::vector<int> distinct = symbols;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.empty() || alphabet <= 0) return {};
  EveGuess g;
  g.known_bits = std::log2(static_cast<double>(alphabet) / static_cast<double>(distinct.size()));
  if (distinct.size() == 1) g.symbol = distinct.front();
  return g;
}

}  // namespace detail

}  // namespace bqkd
