#include "bqkd/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>

#include "bqkd/errors.hpp"

namespace bqkd {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); }

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) invalid(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) invalid("unknown key '" + key + "' in " + where);
  }
}

BasisId basis_from(const json& j) {
  const auto b = parse_basis_id(j.get<std::string>());
  if (!b) invalid("unknown basis " + j.dump());
  return *b;
}

Matrix matrix_from(const json& rows) {
  if (!rows.is_array() || rows.empty()) invalid("unitary matrix must be a nonempty array of rows");
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix u(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = rows.at(static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) invalid("unitary matrix must be square");
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto& z = row.at(static_cast<std::size_t>(c));
      u(r, c) = Complex(z.at(0).get<double>(), z.at(1).get<double>());
    }
  }
  return u;
}

AncillaMap map_from(const json& spec, int d) {
  reject_unknown(spec, {"seed", "matrix", "d_eve"}, "unitary");
  const int d_eve = spec.contains("d_eve") ? spec.at("d_eve").get<int>() : d;
  if (d_eve < 1) invalid("d_eve must be positive");
  if (spec.contains("seed") == spec.contains("matrix")) invalid("unitary needs exactly one of seed, matrix");
  Matrix u;
  if (spec.contains("seed")) {
    Rng rng(spec.at("seed").get<std::uint64_t>());
    u = random_unitary(d * d_eve, rng);
  } else {
    u = matrix_from(spec.at("matrix"));
  }
  return extract_ancilla_map(u, d, d_eve);
}

json map_json(const AncillaMap& m) {
  json rows = json::array();
  for (int i = 0; i < m.d_travel(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.d_travel(); ++j) {
      json v = json::array();
      const auto& e = m.at(i, j);
      for (Eigen::Index k = 0; k < e.size(); ++k) v.push_back({e(k).real(), e(k).imag()});
      row.push_back(v);
    }
    rows.push_back(row);
  }
  return {{"d_eve", m.d_eve()}, {"vectors", rows}};
}

json eve_json(const EveStrategy& s) {
  json j{{"kind", strategy_name(s)}};
  if (const auto* a = std::get_if<SubspaceAttack>(&s)) j["blocks"] = a->blocks;
  if (const auto* a = std::get_if<InterceptResend>(&s)) {
    json bases = json::array();
    for (BasisId b : a->bases) bases.push_back(std::string(to_string(b)));
    j["bases"] = bases;
  }
  if (const auto* a = std::get_if<GeneralEntangle>(&s)) j["map"] = map_json(a->map);
  if (const auto* a = std::get_if<TwoWayEntangle>(&s)) {
    j["forward"] = map_json(a->forward);
    j["backward"] = map_json(a->backward);
  }
  return j;
}

std::vector<double> probs_from(const json& j, const char* what) {
  if (!j.is_array()) invalid(std::string(what) + " must be an array");
  return j.get<std::vector<double>>();
}

}  // namespace

EveStrategy parse_eve(const json& eve, int d) {
  reject_unknown(eve, {"kind", "blocks", "bases", "unitary", "forward", "backward"}, "eve");
  const std::string kind = eve.value("kind", "none");
  auto need = [&](const char* key) -> const json& {
    if (!eve.contains(key)) invalid(std::string("eve kind ") + kind + " needs '" + key + "'");
    return eve.at(key);
  };
  auto forbid_except = [&](std::set<std::string> allowed) {
    allowed.insert("kind");
    reject_unknown(eve, allowed, "eve (" + kind + ")");
  };
  if (kind == "none") {
    forbid_except({});
    return NoEve{};
  }
  if (kind == "subspace") {
    forbid_except({"blocks"});
    const auto blocks = need("blocks").get<Partition>();
    validate_partition(blocks, d);
    return SubspaceAttack{blocks};
  }
  if (kind == "intercept_resend") {
    forbid_except({"bases"});
    InterceptResend ir;
    for (const auto& b : need("bases")) ir.bases.push_back(basis_from(b));
    if (ir.bases.empty()) invalid("intercept_resend needs at least one basis");
    return ir;
  }
  if (kind == "copy") {
    forbid_except({});
    return EntangleMeasureCopy{};
  }
  if (kind == "general") {
    forbid_except({"unitary"});
    return GeneralEntangle{map_from(need("unitary"), d)};
  }
  if (kind == "two_way") {
    forbid_except({"forward", "backward"});
    return TwoWayEntangle{map_from(need("forward"), d), map_from(need("backward"), d)};
  }
  invalid("unknown eve kind '" + kind + "'");
}

ConfigFile parse_config(const json& doc) {
  reject_unknown(doc,
                 {"protocol", "dim", "rounds", "seed", "alice_basis_probs", "bob_basis_probs", "bob_measure_prob",
                  "check_fraction", "abort_qber_threshold", "eve", "output", "trials"},
                 "config");
  ConfigFile out;
  RunConfig& cfg = out.run;
  try {
    if (doc.contains("protocol")) {
      const auto p = parse_protocol(doc.at("protocol").get<std::string>());
      if (!p) invalid("unknown protocol " + doc.at("protocol").dump());
      cfg.protocol = *p;
    }
    if (doc.contains("dim")) cfg.dim = doc.at("dim").get<int>();
    if (doc.contains("rounds")) cfg.rounds = doc.at("rounds").get<int>();
    if (doc.contains("seed")) out.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("alice_basis_probs")) cfg.alice_basis_probs = probs_from(doc.at("alice_basis_probs"), "alice_basis_probs");
    if (doc.contains("bob_basis_probs")) cfg.bob_basis_probs = probs_from(doc.at("bob_basis_probs"), "bob_basis_probs");
    if (doc.contains("bob_measure_prob")) cfg.bob_measure_prob = doc.at("bob_measure_prob").get<double>();
    if (doc.contains("check_fraction")) cfg.check_fraction = doc.at("check_fraction").get<double>();
    if (doc.contains("abort_qber_threshold")) cfg.abort_qber_threshold = doc.at("abort_qber_threshold").get<double>();
    if (doc.contains("trials")) out.trials = doc.at("trials").get<int>();
    if (out.trials < 1) invalid("trials must be positive");
    if (doc.contains("output")) {
      const auto& o = doc.at("output");
      reject_unknown(o, {"report", "transcript", "csv"}, "output");
      out.outputs.report = o.value("report", "");
      out.outputs.transcript = o.value("transcript", "");
      out.outputs.csv = o.value("csv", "");
    }
    if (doc.contains("eve")) cfg.eve = parse_eve(doc.at("eve"), cfg.dim);
  } catch (const json::exception& e) {
    invalid(std::string("type error: ") + e.what());
  }
  cfg.seed = out.seed.value_or(1);
  validate(cfg);
  return out;
}

ConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot open config " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    invalid(path + ": " + e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfig& cfg) {
  return {
      {"protocol", std::string(to_string(cfg.protocol))},
      {"dim", cfg.dim},
      {"rounds", cfg.rounds},
      {"seed", cfg.seed},
      {"alice_basis_probs", alice_probs(cfg)},
      {"bob_basis_probs", is_two_way(cfg.protocol) ? json::array() : json(bob_probs(cfg))},
      {"bob_measure_prob", cfg.bob_measure_prob},
      {"check_fraction", cfg.check_fraction},
      {"abort_qber_threshold", cfg.abort_qber_threshold},
      {"eve", eve_json(cfg.eve)},
  };
}

std::string config_hash(const RunConfig& cfg) {
  const std::string text = to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> cli, std::optional<std::uint64_t> file) {
  if (cli) return *cli;
  if (file) return *file;
  if (const char* env = std::getenv("BQKD_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == nullptr || *end != '\0') invalid("BQKD_SEED must be an unsigned integer");
    return v;
  }
  return 1;
}

}  // namespace bqkd
