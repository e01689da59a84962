#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bqkd/analysis.hpp"
#include "bqkd/config.hpp"
#include "bqkd/engine.hpp"
#include "bqkd/errors.hpp"

namespace bqkd::cli {

enum Exit : int { kOk = 0, kUsage = 1, kAbort = 2, kTransport = 3 };

/// Maps a library error to an exit code.
int exit_code_for(const Error& e);

struct KgrOptions {
  std::vector<int> dims;
  Protocol protocol = Protocol::BQKD;
  double q = 0.5;
  std::string csv;
};

int cmd_kgr(const KgrOptions& o, std::ostream& out);

struct RunOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string report;
  std::string transcript;
  std::string csv;
  std::optional<int> trials;
  int jobs = 1;
};

struct TrialSet {
  ConfigFile file;
  std::vector<RunOutcome> runs;
  SimReport report;
  nlohmann::json json;
};

/// Runs every trial of a config (seeds split from the resolved master seed)
/// and builds the combined report.
TrialSet execute(const ConfigFile& file, int jobs);

int cmd_run(const RunOptions& o, std::ostream& out);

struct VerifyOptions {
  std::vector<int> dims;
  bool plant_corruption = false;
};

/// Sifting rule with one flipped entry on Bob's side, for negative controls.
SiftRule corrupted_rule(int d);

int cmd_verify_rules(const VerifyOptions& o, std::ostream& out);

struct PartyOptions {
  std::string role;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string listen;
  std::string connect;
  /// Written with the bound port once listening (useful with port 0).
  std::string port_file;
  std::string report;
  std::string transcript;
};

int cmd_party(const PartyOptions& o, std::ostream& out);

/// "4", "4:12" or "4,6,10" into a list of dimensions (ranges step by 2).
std::vector<int> parse_dims(const std::string& s);

}  // namespace bqkd::cli
