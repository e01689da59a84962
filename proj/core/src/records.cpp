#include "bqkd/records.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "bqkd/errors.hpp"

namespace bqkd {

using nlohmann::json;

namespace {

void check_probs(const std::vector<double>& p, std::size_t n, const char* what) {
  if (p.empty()) return;
  if (p.size() != n) throw Error(ErrorCode::ConfigInvalid, std::string(what) + ": expected " + std::to_string(n) + " entries");
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorCode::ConfigInvalid, std::string(what) + ": entry out of [0,1]");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kTolerance) throw Error(ErrorCode::ConfigInvalid, std::string(what) + ": must sum to 1");
}

std::vector<double> with_default(const std::vector<double>& p, std::size_t n) {
  if (!p.empty()) return p;
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

json view_json(const SiftOutcome& v) {
  if (!v.is_symbol()) return nullptr;
  return json::array({v.symbol, v.alphabet});
}

SiftOutcome view_from(const json& j) {
  if (j.is_null()) return SiftOutcome::discard();
  return SiftOutcome::key(j.at(0).get<int>(), j.at(1).get<int>());
}

json eve_json(const std::optional<EveObservation>& o) {
  if (!o) return nullptr;
  json j;
  j["basis"] = o->basis ? json(std::string(to_string(*o->basis))) : json(nullptr);
  j["obs"] = o->observation ? json(*o->observation) : json(nullptr);
  return j;
}

std::optional<EveObservation> eve_from(const json& j, int round, Direction dir) {
  if (j.is_null()) return std::nullopt;
  EveObservation o{round, dir, std::nullopt, std::nullopt};
  if (!j.at("basis").is_null()) o.basis = parse_basis_id(j.at("basis").get<std::string>());
  if (!j.at("obs").is_null()) o.observation = j.at("obs").get<int>();
  return o;
}

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<int> opt_int(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<int>();
}

}  // namespace

std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::BQKD: return "bqkd";
    case Protocol::BSQKD: return "bsqkd";
    case Protocol::BB84Qudit: return "bb84";
    case Protocol::SQKD07: return "sqkd07";
  }
  return "?";
}

std::optional<Protocol> parse_protocol(std::string_view s) {
  if (s == "bqkd") return Protocol::BQKD;
  if (s == "bsqkd") return Protocol::BSQKD;
  if (s == "bb84") return Protocol::BB84Qudit;
  if (s == "sqkd07") return Protocol::SQKD07;
  return std::nullopt;
}

bool is_two_way(Protocol p) { return p == Protocol::BSQKD || p == Protocol::SQKD07; }

std::vector<BasisId> protocol_bases(Protocol p) {
  if (p == Protocol::BQKD || p == Protocol::BSQKD) return {BasisId::B0, BasisId::B1, BasisId::B2};
  return {BasisId::B0, BasisId::Fourier};
}

BasisFamily protocol_family(Protocol p, int d) {
  if (p == Protocol::BQKD || p == Protocol::BSQKD) return build_bases(d);
  return baseline_bases(d);
}

void validate(const RunConfig& cfg) {
  const bool boosted = cfg.protocol == Protocol::BQKD || cfg.protocol == Protocol::BSQKD;
  if (cfg.dim % 2 != 0 || cfg.dim < (boosted ? 4 : 2)) {
    throw Error(ErrorCode::UnsupportedDimension, "d = " + std::to_string(cfg.dim) + " for " +
                                                     std::string(to_string(cfg.protocol)));
  }
  if (cfg.rounds <= 0) throw Error(ErrorCode::ConfigInvalid, "rounds must be positive");
  const std::size_t nb = protocol_bases(cfg.protocol).size();
  check_probs(cfg.alice_basis_probs, nb, "alice_basis_probs");
  if (is_two_way(cfg.protocol)) {
    if (!cfg.bob_basis_probs.empty()) throw Error(ErrorCode::ConfigInvalid, "bob_basis_probs: Bob only uses B0 here");
  } else {
    check_probs(cfg.bob_basis_probs, nb, "bob_basis_probs");
  }
  if (!(cfg.bob_measure_prob >= 0.0 && cfg.bob_measure_prob <= 1.0)) {
    throw Error(ErrorCode::ConfigInvalid, "bob_measure_prob out of [0,1]");
  }
  if (!(cfg.check_fraction > 0.0 && cfg.check_fraction < 1.0)) {
    throw Error(ErrorCode::ConfigInvalid, "check_fraction must lie in (0,1)");
  }
  if (!(cfg.abort_qber_threshold >= 0.0 && cfg.abort_qber_threshold <= 1.0)) {
    throw Error(ErrorCode::ConfigInvalid, "abort_qber_threshold out of [0,1]");
  }
  if (std::holds_alternative<TwoWayEntangle>(cfg.eve) && !is_two_way(cfg.protocol)) {
    throw Error(ErrorCode::ConfigInvalid, "two_way attack needs a two-way protocol");
  }
  if (const auto* ir = std::get_if<InterceptResend>(&cfg.eve)) {
    const auto allowed = protocol_bases(cfg.protocol);
    for (BasisId b : ir->bases) {
      if (std::find(allowed.begin(), allowed.end(), b) == allowed.end()) {
        throw Error(ErrorCode::ConfigInvalid, "eve basis " + std::string(to_string(b)) + " not used by protocol");
      }
    }
  }
  validate_strategy(cfg.eve, cfg.dim);
}

std::vector<double> alice_probs(const RunConfig& cfg) {
  return with_default(cfg.alice_basis_probs, protocol_bases(cfg.protocol).size());
}

std::vector<double> bob_probs(const RunConfig& cfg) {
  return with_default(cfg.bob_basis_probs, protocol_bases(cfg.protocol).size());
}

std::string to_string(const RoundClass& c) {
  std::string s = "(" + std::string(to_string(c.alice_basis)) + ",";
  s += c.bob_basis ? std::string(to_string(*c.bob_basis)) : std::string("reflect");
  return s + ")";
}

json to_json(const RoundRecord& r) {
  json j;
  j["round"] = r.round;
  j["protocol"] = std::string(to_string(r.protocol));
  j["alice_basis"] = std::string(to_string(r.alice_basis));
  j["alice_index"] = r.alice_index;
  j["bob_basis"] = r.bob_basis ? json(std::string(to_string(*r.bob_basis))) : json(nullptr);
  j["bob_outcome"] = opt(r.bob_outcome);
  j["alice_return"] = opt(r.alice_return_outcome);
  j["eve_forward"] = eve_json(r.eve_forward);
  j["eve_backward"] = eve_json(r.eve_backward);
  j["alice_view"] = view_json(r.sift.alice);
  j["bob_view"] = view_json(r.sift.bob);
  j["check"] = r.in_check_set;
  j["eve_guess"] = opt(r.eve_guess);
  return j;
}

RoundRecord record_from_json(const json& j) {
  RoundRecord r;
  try {
    r.round = j.at("round").get<int>();
    r.protocol = parse_protocol(j.at("protocol").get<std::string>()).value();
    r.alice_basis = parse_basis_id(j.at("alice_basis").get<std::string>()).value();
    r.alice_index = j.at("alice_index").get<int>();
    if (!j.at("bob_basis").is_null()) r.bob_basis = parse_basis_id(j.at("bob_basis").get<std::string>()).value();
    r.bob_outcome = opt_int(j.at("bob_outcome"));
    r.alice_return_outcome = opt_int(j.at("alice_return"));
    r.eve_forward = eve_from(j.at("eve_forward"), r.round, Direction::Forward);
    r.eve_backward = eve_from(j.at("eve_backward"), r.round, Direction::Backward);
    r.sift = {view_from(j.at("alice_view")), view_from(j.at("bob_view"))};
    r.in_check_set = j.at("check").get<bool>();
    r.eve_guess = opt_int(j.at("eve_guess"));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FramingError, std::string("bad record: ") + e.what());
  } catch (const std::bad_optional_access&) {
    throw Error(ErrorCode::FramingError, "bad record: unknown enum value");
  }
  return r;
}

void write_transcript(std::ostream& os, const std::vector<RoundRecord>& records) {
  for (const auto& r : records) os << to_json(r).dump() << '\n';
}

std::string transcript_string(const std::vector<RoundRecord>& records) {
  std::ostringstream os;
  write_transcript(os, records);
  return os.str();
}

}  // namespace bqkd
