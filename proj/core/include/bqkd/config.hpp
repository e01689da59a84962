#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "bqkd/records.hpp"

namespace bqkd {

struct OutputPaths {
  std::string report;      // JSON SimReport
  std::string transcript;  // JSON lines, one per round
  std::string csv;         // detection curve
};

/// A parsed run configuration file.
struct ConfigFile {
  RunConfig run;
  OutputPaths outputs;
  /// Independent repetitions used for detection curves.
  int trials = 1;
  /// Seed given in the file, if any.
  std::optional<std::uint64_t> seed;
};

/// Validates the document and builds the run; unknown keys are rejected.
/// Throws ConfigInvalid (or the dimension/strategy errors of validate()).
ConfigFile parse_config(const nlohmann::json& doc);
ConfigFile load_config(const std::string& path);

/// Eve section of a config file. Unitaries come from {"seed": n} (Haar draw
/// on d * d_eve) or {"matrix": [[[re, im], ...], ...]}; d_eve defaults to d.
EveStrategy parse_eve(const nlohmann::json& eve, int d);

/// Canonical JSON of a run, with ancilla maps written out numerically.
nlohmann::json to_json(const RunConfig& cfg);

/// FNV-1a of the canonical JSON, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

/// Seed precedence: command line, then config file, then BQKD_SEED, then 1.
std::uint64_t resolve_seed(std::optional<std::uint64_t> cli, std::optional<std::uint64_t> file);

}  // namespace bqkd
