#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bqkd/adversary.hpp"

namespace bqkd {

enum class Protocol { BQKD, BSQKD, BB84Qudit, SQKD07 };

std::string_view to_string(Protocol p);
std::optional<Protocol> parse_protocol(std::string_view s);

bool is_two_way(Protocol p);

/// Bases Alice may prepare in: {B0, B1, B2}, or {B0, Fourier} for the baselines.
std::vector<BasisId> protocol_bases(Protocol p);

/// b0/b1/b2/fourier for the boosted protocols, b0/fourier for the baselines.
BasisFamily protocol_family(Protocol p, int d);

struct RunConfig {
  Protocol protocol = Protocol::BQKD;
  int dim = 4;
  int rounds = 1000;
  std::uint64_t seed = 1;
  /// Empty means uniform over protocol_bases().
  std::vector<double> alice_basis_probs;
  std::vector<double> bob_basis_probs;
  double bob_measure_prob = 0.5;
  double check_fraction = 0.1;
  double abort_qber_threshold = 0.0;
  EveStrategy eve = NoEve{};
};

/// Throws ConfigInvalid, UnsupportedDimension or the strategy's own errors.
void validate(const RunConfig& cfg);

/// alice_basis_probs / bob_basis_probs with the uniform default filled in.
std::vector<double> alice_probs(const RunConfig& cfg);
std::vector<double> bob_probs(const RunConfig& cfg);

/// Statistics key: Alice's basis and Bob's measurement basis (empty = reflect).
struct RoundClass {
  BasisId alice_basis = BasisId::B0;
  std::optional<BasisId> bob_basis;

  auto operator<=>(const RoundClass&) const = default;
};

std::string to_string(const RoundClass& c);

struct RoundRecord {
  int round = 0;
  Protocol protocol = Protocol::BQKD;
  BasisId alice_basis = BasisId::B0;
  int alice_index = 0;
  /// Bob's measurement basis; empty when he reflected.
  std::optional<BasisId> bob_basis;
  std::optional<int> bob_outcome;
  /// Alice's measurement of the returned qudit (two-way protocols).
  std::optional<int> alice_return_outcome;
  std::optional<EveObservation> eve_forward;
  std::optional<EveObservation> eve_backward;
  SiftViews sift;
  bool in_check_set = false;
  std::optional<int> eve_guess;

  RoundClass round_class() const { return {alice_basis, bob_basis}; }
  bool measured() const { return bob_basis.has_value(); }

  bool operator==(const RoundRecord&) const = default;
};

nlohmann::json to_json(const RoundRecord& r);
RoundRecord record_from_json(const nlohmann::json& j);

/// One JSON object per line, keys sorted, no trailing spaces.
void write_transcript(std::ostream& os, const std::vector<RoundRecord>& records);
std::string transcript_string(const std::vector<RoundRecord>& records);

}  // namespace bqkd
