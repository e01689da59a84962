#include "bqkd/engine.hpp"

#include <algorithm>
#include <set>

#include "bqkd/config.hpp"
#include "bqkd/errors.hpp"

namespace bqkd {

using nlohmann::json;

namespace {

WireMessage expect(WireMessage m, MessageKind kind) {
  if (m.kind != kind) {
    throw Error(ErrorCode::TransportFailure,
                "expected " + std::string(to_string(kind)) + ", got " + std::string(to_string(m.kind)));
  }
  return m;
}

int basis_code(BasisId b) { return static_cast<int>(b); }

BasisId basis_from_code(int c) {
  if (c < 0 || c > 3) throw Error(ErrorCode::FramingError, "bad basis code " + std::to_string(c));
  return static_cast<BasisId>(c);
}

std::vector<int> int_list(const json& payload, const char* key) {
  try {
    return payload.at(key).get<std::vector<int>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FramingError, std::string(key) + ": " + e.what());
  }
}

void check_round_list(const std::vector<int>& rounds, int n) {
  for (int r : rounds) {
    if (r < 0 || r >= n) throw Error(ErrorCode::FramingError, "round " + std::to_string(r) + " out of range");
  }
}

json alice_audit_json(const AliceAudit& a) {
  std::vector<int> bases;
  bases.reserve(a.bases.size());
  for (BasisId b : a.bases) bases.push_back(basis_code(b));
  return {{"bases", bases}, {"indices", a.indices}, {"returns", a.returns}};
}

AliceAudit alice_audit_from(const json& j) {
  AliceAudit a;
  for (int c : int_list(j, "bases")) a.bases.push_back(basis_from_code(c));
  a.indices = int_list(j, "indices");
  a.returns = int_list(j, "returns");
  return a;
}

json bob_audit_json(const BobAudit& b) {
  std::vector<int> bases;
  bases.reserve(b.bases.size());
  for (const auto& x : b.bases) bases.push_back(x ? basis_code(*x) : -1);
  return {{"bases", bases}, {"outcomes", b.outcomes}};
}

BobAudit bob_audit_from(const json& j) {
  BobAudit b;
  for (int c : int_list(j, "bases")) {
    b.bases.push_back(c < 0 ? std::nullopt : std::optional<BasisId>(basis_from_code(c)));
  }
  b.outcomes = int_list(j, "outcomes");
  return b;
}

EveLog eve_log_of(const json& payload) {
  if (!payload.is_object() || !payload.contains("eve")) return {};
  return eve_log_from_json(payload.at("eve"));
}

}  // namespace

json eve_log_json(const EveLog& log) {
  json out = json::array();
  for (const auto& e : log.entries) {
    out.push_back({e.round, e.direction == Direction::Forward ? 0 : 1, e.basis ? basis_code(*e.basis) : -1,
                   e.observation.value_or(-1)});
  }
  return out;
}

EveLog eve_log_from_json(const json& j) {
  EveLog log;
  try {
    for (const auto& e : j) {
      EveObservation o;
      o.round = e.at(0).get<int>();
      o.direction = e.at(1).get<int>() == 0 ? Direction::Forward : Direction::Backward;
      if (const int b = e.at(2).get<int>(); b >= 0) o.basis = basis_from_code(b);
      if (const int x = e.at(3).get<int>(); x >= 0) o.observation = x;
      log.entries.push_back(o);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FramingError, std::string("eve log: ") + e.what());
  }
  return log;
}

std::vector<RoundRecord> assemble_records(const RunConfig& cfg, const AliceAudit& alice, const BobAudit& bob,
                                          const EveLog& eve, const std::vector<int>& check_rounds) {
  const auto n = static_cast<std::size_t>(cfg.rounds);
  const bool two_way = is_two_way(cfg.protocol);
  if (alice.bases.size() != n || alice.indices.size() != n || bob.bases.size() != n || bob.outcomes.size() != n ||
      (two_way && alice.returns.size() != n)) {
    throw Error(ErrorCode::FramingError, "audit length does not match the round count");
  }
  const int d = cfg.dim;
  const auto family = protocol_family(cfg.protocol, d);
  std::vector<RoundRecord> recs(n);
  for (std::size_t r = 0; r < n; ++r) {
    auto& rec = recs[r];
    rec.round = static_cast<int>(r);
    rec.protocol = cfg.protocol;
    rec.alice_basis = alice.bases[r];
    rec.alice_index = alice.indices[r];
    rec.bob_basis = bob.bases[r];
    if (bob.outcomes[r] >= 0) rec.bob_outcome = bob.outcomes[r];
    if (two_way) rec.alice_return_outcome = alice.returns[r];
  }
  for (const auto& e : eve.entries) {
    if (e.round < 0 || static_cast<std::size_t>(e.round) >= n) throw Error(ErrorCode::FramingError, "eve log round");
    auto& rec = recs[static_cast<std::size_t>(e.round)];
    (e.direction == Direction::Forward ? rec.eve_forward : rec.eve_backward) = e;
  }
  for (int c : check_rounds) {
    if (c < 0 || static_cast<std::size_t>(c) >= n) throw Error(ErrorCode::FramingError, "check round out of range");
    recs[static_cast<std::size_t>(c)].in_check_set = true;
  }
  for (auto& rec : recs) {
    rec.sift = record_views(rec, d);
    if (!rec.sift.kept() || !rec.eve_forward) continue;
    const BasisId ab = rec.alice_basis;
    const auto guess = eve_guess(cfg.eve, &*rec.eve_forward, family, ab, [&](int k) {
      return two_way ? two_way_alice_view(cfg.protocol, d, ab, k, true)
                     : one_way_alice_view(cfg.protocol, d, ab, k, *rec.bob_basis);
    });
    rec.eve_guess = guess.symbol;
  }
  return recs;
}

// ---------------------------------------------------------------- Alice

AliceParty::AliceParty(RunConfig cfg)
    : cfg_(std::move(cfg)),
      family_(protocol_family(cfg_.protocol, cfg_.dim)),
      rng_(split_seed(cfg_.seed, kAliceStream)) {}

RunOutcome AliceParty::run(Channel& ch) {
  validate(cfg_);
  const std::string hash = config_hash(cfg_);
  auto hello = ch.request(WireMessage::classical(MessageKind::Hello, {{"config_hash", hash}}));
  if (hello.kind == MessageKind::Abort || hello.payload.value("config_hash", "") != hash) {
    throw Error(ErrorCode::ConfigMismatch, "peer config hash differs from " + hash);
  }
  expect(std::move(hello), MessageKind::Hello);

  if (is_two_way(cfg_.protocol)) {
    quantum_rounds_two_way(ch);
  } else {
    quantum_rounds_one_way(ch);
  }

  std::map<RoundClass, ClassStats> qber;
  std::vector<int> check;
  bool reveal_bases = true;
  if (is_two_way(cfg_.protocol)) {
    check = sift_two_way(ch, qber, reveal_bases);
  } else {
    check = sift_one_way(ch, qber);
  }
  return finish(ch, should_abort(qber, cfg_.abort_qber_threshold), check);
}

void AliceParty::quantum_rounds_one_way(Channel& ch) {
  const auto bases = protocol_bases(cfg_.protocol);
  const auto probs = alice_probs(cfg_);
  for (int r = 0; r < cfg_.rounds; ++r) {
    const BasisId b = bases[static_cast<std::size_t>(rng_.sample(probs))];
    const int k = rng_.index(cfg_.dim);
    audit_.bases.push_back(b);
    audit_.indices.push_back(k);
    const auto& v = family_.get(b).vectors[static_cast<std::size_t>(k)];
    const auto ack = expect(ch.request(WireMessage::qstate(r, JointState(v))), MessageKind::Ack);
    if (ack.round != r) throw Error(ErrorCode::TransportFailure, "ack for the wrong round");
  }
}

void AliceParty::quantum_rounds_two_way(Channel& ch) {
  const auto bases = protocol_bases(cfg_.protocol);
  const auto probs = alice_probs(cfg_);
  for (int r = 0; r < cfg_.rounds; ++r) {
    const BasisId b = bases[static_cast<std::size_t>(rng_.sample(probs))];
    const int k = rng_.index(cfg_.dim);
    audit_.bases.push_back(b);
    audit_.indices.push_back(k);
    const auto& v = family_.get(b).vectors[static_cast<std::size_t>(k)];
    auto back = expect(ch.request(WireMessage::qstate(r, JointState(v))), MessageKind::QState);
    if (back.round != r || !back.state) throw Error(ErrorCode::TransportFailure, "bad returned state");
    audit_.returns.push_back(back.state->measure_travel(family_.get(b), rng_));
  }
}

std::vector<int> AliceParty::sift_one_way(Channel& ch, std::map<RoundClass, ClassStats>& qber) {
  const int n = cfg_.rounds;
  const int d = cfg_.dim;
  std::vector<int> mine;
  mine.reserve(static_cast<std::size_t>(n));
  for (BasisId b : audit_.bases) mine.push_back(basis_code(b));
  const auto reply = expect(ch.request(WireMessage::classical(MessageKind::BasisReveal, {{"bases", mine}})),
                            MessageKind::BasisReveal);
  std::vector<BasisId> bob_bases;
  for (int c : int_list(reply.payload, "bases")) bob_bases.push_back(basis_from_code(c));
  if (bob_bases.size() != static_cast<std::size_t>(n)) throw Error(ErrorCode::FramingError, "basis list length");

  std::vector<int> discards;
  for (int r = 0; r < n; ++r) {
    const auto ur = static_cast<std::size_t>(r);
    if (!one_way_alice_view(cfg_.protocol, d, audit_.bases[ur], audit_.indices[ur], bob_bases[ur]).is_symbol()) {
      discards.push_back(r);
    }
  }
  const auto theirs = int_list(
      expect(ch.request(WireMessage::classical(MessageKind::DiscardSet, {{"rounds", discards}})), MessageKind::DiscardSet)
          .payload,
      "rounds");
  check_round_list(theirs, n);
  std::vector<char> dropped(static_cast<std::size_t>(n), 0);
  for (int r : discards) dropped[static_cast<std::size_t>(r)] = 1;
  for (int r : theirs) dropped[static_cast<std::size_t>(r)] = 1;
  std::vector<int> candidates;
  for (int r = 0; r < n; ++r) {
    if (!dropped[static_cast<std::size_t>(r)]) candidates.push_back(r);
  }

  const auto check = select_check_set(candidates, cfg_.check_fraction, rng_);
  const auto symbols = int_list(
      expect(ch.request(WireMessage::classical(MessageKind::CheckSetRequest, {{"rounds", check}})),
             MessageKind::CheckData)
          .payload,
      "symbols");
  if (symbols.size() != check.size()) throw Error(ErrorCode::FramingError, "check data length");
  for (std::size_t i = 0; i < check.size(); ++i) {
    const auto r = static_cast<std::size_t>(check[i]);
    const auto mine_view = one_way_alice_view(cfg_.protocol, d, audit_.bases[r], audit_.indices[r], bob_bases[r]);
    auto& st = qber[{audit_.bases[r], bob_bases[r]}];
    ++st.checked;
    if (mine_view.symbol != symbols[i]) ++st.errors;
  }
  return check;
}

std::vector<int> AliceParty::sift_two_way(Channel& ch, std::map<RoundClass, ClassStats>& qber, bool& reveal_bases) {
  const int n = cfg_.rounds;
  const int d = cfg_.dim;
  const auto measured_list = int_list(
      expect(ch.request(WireMessage::classical(MessageKind::MeasuredRoundsReveal, json::object())),
             MessageKind::MeasuredRoundsReveal)
          .payload,
      "rounds");
  check_round_list(measured_list, n);
  std::vector<char> measured(static_cast<std::size_t>(n), 0);
  for (int r : measured_list) measured[static_cast<std::size_t>(r)] = 1;

  auto probe = [&](int r) {
    RoundRecord rec;
    const auto ur = static_cast<std::size_t>(r);
    rec.protocol = cfg_.protocol;
    rec.alice_basis = audit_.bases[ur];
    rec.alice_index = audit_.indices[ur];
    rec.alice_return_outcome = audit_.returns[ur];
    if (measured[ur]) rec.bob_basis = BasisId::B0;
    return rec;
  };

  std::vector<int> reflect_rounds;
  std::vector<int> candidates;
  for (int r = 0; r < n; ++r) {
    const auto ur = static_cast<std::size_t>(r);
    if (!measured[ur]) {
      reflect_rounds.push_back(r);
    } else if (two_way_alice_view(cfg_.protocol, d, audit_.bases[ur], audit_.indices[ur], true).is_symbol()) {
      candidates.push_back(r);
    }
  }
  for (int r : reflect_rounds) {
    auto rec = probe(r);
    auto& st = qber[rec.round_class()];
    ++st.checked;
    if (check_error(rec, d)) ++st.errors;
  }

  const auto check = select_check_set(candidates, cfg_.check_fraction, rng_);
  const auto outcomes = int_list(
      expect(ch.request(WireMessage::classical(MessageKind::CheckSetRequest, {{"rounds", check}})),
             MessageKind::CheckData)
          .payload,
      "outcomes");
  if (outcomes.size() != check.size()) throw Error(ErrorCode::FramingError, "check data length");
  for (std::size_t i = 0; i < check.size(); ++i) {
    auto rec = probe(check[i]);
    rec.bob_outcome = outcomes[i];
    auto& st = qber[rec.round_class()];
    ++st.checked;
    if (check_error(rec, d)) ++st.errors;
  }

  reveal_bases = !should_abort(qber, cfg_.abort_qber_threshold);
  if (reveal_bases) {
    std::vector<int> mine;
    for (BasisId b : audit_.bases) mine.push_back(basis_code(b));
    expect(ch.request(WireMessage::classical(MessageKind::BasisReveal, {{"bases", mine}})), MessageKind::Ack);
  }

  std::vector<int> all;
  std::merge(reflect_rounds.begin(), reflect_rounds.end(), check.begin(), check.end(), std::back_inserter(all));
  return all;
}

RunOutcome AliceParty::finish(Channel& ch, bool abort, const std::vector<int>& check_rounds) {
  json payload{{"abort", abort}, {"check", check_rounds}, {"alice", alice_audit_json(audit_)}};
  const auto reply =
      expect(ch.request(WireMessage::classical(abort ? MessageKind::Abort : MessageKind::Done, std::move(payload))),
             MessageKind::Done);
  const BobAudit bob = bob_audit_from(reply.payload.at("bob"));
  RunOutcome out;
  out.records = assemble_records(cfg_, audit_, bob, eve_log_of(reply.payload), check_rounds);
  out.sift = sift(out.records, cfg_);
  return out;
}

// ---------------------------------------------------------------- Bob

BobParty::BobParty(RunConfig cfg)
    : cfg_(std::move(cfg)),
      family_(protocol_family(cfg_.protocol, cfg_.dim)),
      rng_(split_seed(cfg_.seed, kBobStream)) {}

WireMessage BobParty::handle(const WireMessage& m) {
  const int d = cfg_.dim;
  const int n = static_cast<int>(audit_.bases.size());
  switch (m.kind) {
    case MessageKind::Hello: {
      const std::string hash = config_hash(cfg_);
      if (m.payload.value("config_hash", "") != hash) {
        finished_ = mismatch_ = true;
        return WireMessage::classical(MessageKind::Abort, {{"reason", "config hash mismatch"}, {"config_hash", hash}});
      }
      return WireMessage::classical(MessageKind::Hello, {{"config_hash", hash}});
    }
    case MessageKind::QState: {
      if (!m.state || m.round != n) throw Error(ErrorCode::FramingError, "unexpected QState frame");
      JointState s = *m.state;
      if (is_two_way(cfg_.protocol)) {
        if (rng_.bernoulli(cfg_.bob_measure_prob)) {
          audit_.bases.push_back(BasisId::B0);
          audit_.outcomes.push_back(s.measure_travel(family_.b0, rng_));
        } else {
          audit_.bases.push_back(std::nullopt);
          audit_.outcomes.push_back(-1);
        }
        return WireMessage::qstate(m.round, std::move(s));
      }
      const auto bases = protocol_bases(cfg_.protocol);
      const BasisId b = bases[static_cast<std::size_t>(rng_.sample(bob_probs(cfg_)))];
      audit_.bases.push_back(b);
      audit_.outcomes.push_back(s.measure_travel(family_.get(b), rng_));
      return WireMessage::classical(MessageKind::Ack, nullptr, m.round);
    }
    case MessageKind::BasisReveal: {
      alice_bases_.clear();
      for (int c : int_list(m.payload, "bases")) alice_bases_.push_back(basis_from_code(c));
      if (static_cast<int>(alice_bases_.size()) != n) throw Error(ErrorCode::FramingError, "basis list length");
      if (is_two_way(cfg_.protocol)) return WireMessage::classical(MessageKind::Ack, nullptr);
      std::vector<int> mine;
      for (const auto& b : audit_.bases) mine.push_back(basis_code(*b));
      return WireMessage::classical(MessageKind::BasisReveal, {{"bases", mine}});
    }
    case MessageKind::DiscardSet: {
      if (static_cast<int>(alice_bases_.size()) != n) throw Error(ErrorCode::FramingError, "discards before bases");
      std::vector<int> discards;
      for (int r = 0; r < n; ++r) {
        const auto ur = static_cast<std::size_t>(r);
        if (!one_way_bob_view(cfg_.protocol, d, alice_bases_[ur], *audit_.bases[ur], audit_.outcomes[ur]).is_symbol()) {
          discards.push_back(r);
        }
      }
      return WireMessage::classical(MessageKind::DiscardSet, {{"rounds", discards}});
    }
    case MessageKind::MeasuredRoundsReveal: {
      std::vector<int> rounds;
      for (int r = 0; r < n; ++r) {
        if (audit_.bases[static_cast<std::size_t>(r)]) rounds.push_back(r);
      }
      return WireMessage::classical(MessageKind::MeasuredRoundsReveal, {{"rounds", rounds}});
    }
    case MessageKind::CheckSetRequest: {
      const auto rounds = int_list(m.payload, "rounds");
      check_round_list(rounds, n);
      std::vector<int> data;
      for (int r : rounds) {
        const auto ur = static_cast<std::size_t>(r);
        if (is_two_way(cfg_.protocol)) {
          data.push_back(audit_.outcomes[ur]);
        } else {
          data.push_back(
              one_way_bob_view(cfg_.protocol, d, alice_bases_.at(ur), *audit_.bases[ur], audit_.outcomes[ur]).symbol);
        }
      }
      return WireMessage::classical(MessageKind::CheckData,
                                    {{is_two_way(cfg_.protocol) ? "outcomes" : "symbols", data}});
    }
    case MessageKind::Done:
    case MessageKind::Abort: {
      const AliceAudit alice = alice_audit_from(m.payload.at("alice"));
      const auto check = int_list(m.payload, "check");
      records_ = assemble_records(cfg_, alice, audit_, eve_log_of(m.payload), check);
      finished_ = true;
      aborted_ = m.kind == MessageKind::Abort;
      return WireMessage::classical(MessageKind::Done, {{"bob", bob_audit_json(audit_)}});
    }
    default:
      throw Error(ErrorCode::FramingError, "Bob cannot handle " + std::string(to_string(m.kind)));
  }
}

// ---------------------------------------------------------------- Eve

EveRelay::EveRelay(RunConfig cfg)
    : cfg_(std::move(cfg)),
      family_(protocol_family(cfg_.protocol, cfg_.dim)),
      rng_(split_seed(cfg_.seed, kEveStream)),
      hash_(config_hash(cfg_)) {}

void EveRelay::forward(WireMessage& m) {
  switch (m.kind) {
    case MessageKind::Hello:
      if (m.payload.value("config_hash", "") != hash_) {
        throw Error(ErrorCode::ConfigMismatch, "relay config hash differs from Alice's");
      }
      break;
    case MessageKind::QState:
      if (!m.state) throw Error(ErrorCode::FramingError, "QState frame without a state");
      eve_apply(cfg_.eve, Direction::Forward, m.round, *m.state, family_, rng_, log_);
      break;
    case MessageKind::Done:
    case MessageKind::Abort:
      m.payload["eve"] = eve_log_json(log_);
      break;
    default:
      break;
  }
}

void EveRelay::backward(WireMessage& m) {
  if (m.kind == MessageKind::QState && attacks_backward(cfg_.eve)) {
    if (!m.state) throw Error(ErrorCode::FramingError, "QState frame without a state");
    eve_apply(cfg_.eve, Direction::Backward, m.round, *m.state, family_, rng_, log_);
  } else if (m.kind == MessageKind::Done && m.payload.is_object() && m.payload.contains("bob")) {
    m.payload["eve"] = eve_log_json(log_);
  }
}

// ---------------------------------------------------------------- entry points

RunOutcome run_in_process(const RunConfig& cfg) {
  validate(cfg);
  BobParty bob(cfg);
  EveRelay eve(cfg);
  LoopbackChannel ch(bob, &eve);
  return AliceParty(cfg).run(ch);
}

RunOutcome run_bqkd(const RunConfig& cfg, Channel& ch) {
  if (cfg.protocol != Protocol::BQKD) throw Error(ErrorCode::ConfigInvalid, "run_bqkd needs protocol bqkd");
  return AliceParty(cfg).run(ch);
}

RunOutcome run_bsqkd(const RunConfig& cfg, Channel& ch) {
  if (cfg.protocol != Protocol::BSQKD) throw Error(ErrorCode::ConfigInvalid, "run_bsqkd needs protocol bsqkd");
  return AliceParty(cfg).run(ch);
}

RunOutcome run_baseline(const RunConfig& cfg, Channel& ch) {
  if (cfg.protocol != Protocol::BB84Qudit && cfg.protocol != Protocol::SQKD07) {
    throw Error(ErrorCode::ConfigInvalid, "run_baseline needs protocol bb84 or sqkd07");
  }
  return AliceParty(cfg).run(ch);
}

}  // namespace bqkd
