#pragma once

#include <vector>

#include "bqkd/records.hpp"
#include "bqkd/sift.hpp"
#include "bqkd/transport.hpp"

namespace bqkd {

struct RunOutcome {
  std::vector<RoundRecord> records;
  SiftResult sift;
  bool aborted() const { return sift.abort; }
};

// Private data each party discloses in the final exchange so that every
// process can rebuild the same transcript.
struct AliceAudit {
  std::vector<BasisId> bases;
  std::vector<int> indices;
  std::vector<int> returns;  // two-way only
};

struct BobAudit {
  std::vector<std::optional<BasisId>> bases;  // empty = reflect
  std::vector<int> outcomes;                  // -1 when reflected
};

std::vector<RoundRecord> assemble_records(const RunConfig& cfg, const AliceAudit& alice, const BobAudit& bob,
                                          const EveLog& eve, const std::vector<int>& check_rounds);

/// Alice's side of a run over `ch`: quantum rounds, then the classical
/// sifting and checking exchange, then the final audit exchange.
class AliceParty {
 public:
  explicit AliceParty(RunConfig cfg);
  RunOutcome run(Channel& ch);

 private:
  void quantum_rounds_one_way(Channel& ch);
  void quantum_rounds_two_way(Channel& ch);
  std::vector<int> sift_one_way(Channel& ch, std::map<RoundClass, ClassStats>& qber);
  std::vector<int> sift_two_way(Channel& ch, std::map<RoundClass, ClassStats>& qber, bool& reveal_bases);
  RunOutcome finish(Channel& ch, bool abort, const std::vector<int>& check_rounds);

  RunConfig cfg_;
  BasisFamily family_;
  Rng rng_;
  AliceAudit audit_;
};

/// Bob: answers each frame in turn. Never sees Alice's private data before
/// the final exchange.
class BobParty : public Responder {
 public:
  explicit BobParty(RunConfig cfg);
  WireMessage handle(const WireMessage& m) override;

  bool finished() const noexcept { return finished_; }
  /// Set when the run ended on a config mismatch.
  bool mismatch() const noexcept { return mismatch_; }
  bool aborted() const noexcept { return aborted_; }
  const std::vector<RoundRecord>& records() const noexcept { return records_; }

 private:
  RunConfig cfg_;
  BasisFamily family_;
  Rng rng_;
  BobAudit audit_;
  std::vector<BasisId> alice_bases_;
  bool finished_ = false;
  bool mismatch_ = false;
  bool aborted_ = false;
  std::vector<RoundRecord> records_;
};

/// Eve between the two parties: attacks QState frames and appends her log
/// to the final exchange.
class EveRelay : public Relay {
 public:
  explicit EveRelay(RunConfig cfg);
  void forward(WireMessage& m) override;
  void backward(WireMessage& m) override;

  const EveLog& log() const noexcept { return log_; }

 private:
  RunConfig cfg_;
  BasisFamily family_;
  Rng rng_;
  EveLog log_;
  std::string hash_;
};

/// Full run in one process through a LoopbackChannel.
RunOutcome run_in_process(const RunConfig& cfg);

// Protocol-specific entry points; each checks cfg.protocol and runs Alice's
// script over `ch`.
RunOutcome run_bqkd(const RunConfig& cfg, Channel& ch);
RunOutcome run_bsqkd(const RunConfig& cfg, Channel& ch);
RunOutcome run_baseline(const RunConfig& cfg, Channel& ch);

nlohmann::json eve_log_json(const EveLog& log);
EveLog eve_log_from_json(const nlohmann::json& j);

}  // namespace bqkd
