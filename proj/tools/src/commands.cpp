#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "bqkd/detection.hpp"
#include "bqkd/golden.hpp"
#include "bqkd/transport.hpp"

namespace bqkd::cli {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::ConfigInvalid, "cannot write " + path);
  f << body;
}

void write_json(const std::string& path, const nlohmann::json& j) { write_file(path, j.dump(2) + "\n"); }

ConfigFile load_with_seed(const std::string& path, std::optional<std::uint64_t> cli_seed) {
  auto file = load_config(path);
  file.run.seed = resolve_seed(cli_seed, file.seed);
  return file;
}

void print_summary(std::ostream& out, const SimReport& r) {
  out << to_string(r.protocol) << " d=" << r.dim << " rounds=" << r.rounds << " kgr=" << fmt(r.empirical_kgr)
      << " analytic=" << fmt(r.analytic_kgr) << " key=" << r.key_length << (r.aborted ? " ABORT" : " ok") << "\n";
  for (const auto& [cls, st] : r.qber_by_class) {
    out << "  " << to_string(cls) << " qber=" << fmt(st.rate()) << " (" << st.errors << "/" << st.checked << ")\n";
  }
}

}  // namespace

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::TransportFailure:
    case ErrorCode::FramingError:
      return kTransport;
    default:
      return kUsage;
  }
}

std::vector<int> parse_dims(const std::string& s) {
  std::vector<int> out;
  auto bad = [&] { return Error(ErrorCode::ConfigInvalid, "bad dimension list '" + s + "'"); };
  try {
    if (const auto colon = s.find(':'); colon != std::string::npos) {
      const int lo = std::stoi(s.substr(0, colon));
      const int hi = std::stoi(s.substr(colon + 1));
      if (hi < lo) throw bad();
      for (int d = lo; d <= hi; d += 2) out.push_back(d);
      return out;
    }
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(std::stoi(part));
  } catch (const std::logic_error&) {
    throw bad();
  }
  if (out.empty()) throw bad();
  return out;
}

int cmd_kgr(const KgrOptions& o, std::ostream& out) {
  switch (o.protocol) {
    case Protocol::BQKD: {
      const auto curve = kgr_ratio_curve(o.dims);
      out << "d\tkgr_bqkd\tkgr_bb84\tratio\n";
      for (const auto& p : curve) {
        out << p.d << "\t" << fmt(p.kgr_bqkd) << "\t" << fmt(p.kgr_bb84) << "\t" << fmt(p.ratio) << "\n";
      }
      if (!o.csv.empty()) {
        std::ofstream f(o.csv);
        if (!f) throw Error(ErrorCode::ConfigInvalid, "cannot write " + o.csv);
        write_ratio_csv(f, curve);
      }
      return kOk;
    }
    case Protocol::BSQKD:
      out << "d\tkgr_bsqkd\n";
      for (int d : o.dims) out << d << "\t" << fmt(kgr_bsqkd(d, o.q)) << "\n";
      return kOk;
    case Protocol::BB84Qudit:
      out << "d\tkgr_bb84\n";
      for (int d : o.dims) out << d << "\t" << fmt(kgr_bb84(d)) << "\n";
      return kOk;
    case Protocol::SQKD07:
      out << "d\tkgr_sqkd07\n";
      for (int d : o.dims) out << d << "\t" << fmt(kgr_sqkd07(d, o.q)) << "\n";
      return kOk;
  }
  return kUsage;
}

TrialSet execute(const ConfigFile& file, int jobs) {
  TrialSet t;
  t.file = file;
  const int n = std::max(1, file.trials);
  t.runs.resize(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  auto work = [&] {
    for (int i = next++; i < n; i = next++) {
      RunConfig cfg = file.run;
      if (i > 0) cfg.seed = split_seed(file.run.seed, 100 + static_cast<std::uint64_t>(i));
      try {
        t.runs[static_cast<std::size_t>(i)] = run_in_process(cfg);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const int workers = std::clamp(jobs, 1, n);
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  t.report = summarize(t.runs.front().records, file.run);
  int aborted = 0;
  for (const auto& r : t.runs) aborted += r.aborted() ? 1 : 0;
  if (n > 1) {
    std::vector<std::vector<RoundRecord>> all;
    all.reserve(t.runs.size());
    for (auto& r : t.runs) all.push_back(r.records);
    for (auto& c : t.report.detection) {
      c = detection_curve(all, file.run.dim, c.cls, static_cast<int>(c.points.size()), c.p_round);
    }
  }
  t.json = to_json(t.report);
  t.json["seed"] = file.run.seed;
  t.json["config_hash"] = config_hash(file.run);
  t.json["trials"] = {{"count", n}, {"aborted", aborted}, {"detection_from_trials", n > 1}};
  return t;
}

int cmd_run(const RunOptions& o, std::ostream& out) {
  auto file = load_with_seed(o.config, o.seed);
  if (o.trials) file.trials = *o.trials;
  if (!o.report.empty()) file.outputs.report = o.report;
  if (!o.transcript.empty()) file.outputs.transcript = o.transcript;
  if (!o.csv.empty()) file.outputs.csv = o.csv;

  const auto t = execute(file, o.jobs);
  print_summary(out, t.report);
  if (!file.outputs.report.empty()) write_json(file.outputs.report, t.json);
  if (!file.outputs.transcript.empty()) write_file(file.outputs.transcript, transcript_string(t.runs.front().records));
  if (!file.outputs.csv.empty()) {
    std::ostringstream ss;
    write_detection_csv(ss, t.report.detection);
    write_file(file.outputs.csv, ss.str());
  }
  for (const auto& r : t.runs) {
    if (r.aborted()) return kAbort;
  }
  return kOk;
}

SiftRule corrupted_rule(int d) {
  return [d](int dd, BasisId ab, int ai, BasisId bb, int bo) {
    auto v = sift_symbol(dd, ab, ai, bb, bo);
    if (dd == d && ab == BasisId::B1 && bb == BasisId::B1 && ai == 0 && bo == 0 && v.bob.is_symbol()) {
      v.bob.symbol = (v.bob.symbol + 1) % v.bob.alphabet;
    }
    return v;
  };
}

int cmd_verify_rules(const VerifyOptions& o, std::ostream& out) {
  bool ok = true;
  for (int d : o.dims) {
    const SiftRule rule = o.plant_corruption ? corrupted_rule(d) : SiftRule(sift_symbol);
    auto v = check_unambiguity(d, rule);
    const auto g = check_golden(d, rule);
    const auto rows = golden_rows(d).size();
    out << "d=" << d << " unambiguity " << (v.empty() ? "PASS" : "FAIL") << " golden(" << rows << " rows) "
        << (g.empty() ? "PASS" : "FAIL") << "\n";
    v.insert(v.end(), g.begin(), g.end());
    for (std::size_t i = 0; i < v.size() && i < 10; ++i) out << "  " << v[i].describe() << "\n";
    if (v.size() > 10) out << "  ... " << v.size() - 10 << " more\n";
    ok = ok && v.empty();
  }
  return ok ? kOk : kUsage;
}

int cmd_party(const PartyOptions& o, std::ostream& out) {
  const auto file = load_with_seed(o.config, o.seed);
  const auto& cfg = file.run;
  const std::string transcript = o.transcript.empty() ? file.outputs.transcript : o.transcript;

  auto listen = [&]() {
    const auto [host, port] = parse_endpoint(o.listen);
    auto l = std::make_unique<Listener>(host, port);
    if (!o.port_file.empty()) write_file(o.port_file, std::to_string(l->port()) + "\n");
    return l;
  };
  auto connect = [&]() {
    const auto [host, port] = parse_endpoint(o.connect);
    return SocketChannel::connect(host, port);
  };

  if (o.role == "alice") {
    if (o.connect.empty()) throw Error(ErrorCode::ConfigInvalid, "alice needs --connect");
    auto ch = connect();
    const auto outcome = AliceParty(cfg).run(*ch);
    const auto report = summarize(outcome.records, cfg);
    print_summary(out, report);
    const std::string report_path = o.report.empty() ? file.outputs.report : o.report;
    if (!report_path.empty()) write_json(report_path, to_json(report));
    if (!transcript.empty()) write_file(transcript, transcript_string(outcome.records));
    return outcome.aborted() ? kAbort : kOk;
  }
  if (o.role == "bob") {
    if (o.listen.empty()) throw Error(ErrorCode::ConfigInvalid, "bob needs --listen");
    auto l = listen();
    auto ch = l->accept();
    BobParty bob(cfg);
    serve(*ch, bob);
    if (bob.mismatch()) {
      out << "config hash mismatch\n";
      return kUsage;
    }
    if (!transcript.empty()) write_file(transcript, transcript_string(bob.records()));
    out << "bob done, " << bob.records().size() << " rounds" << (bob.aborted() ? ", aborted" : "") << "\n";
    return bob.aborted() ? kAbort : kOk;
  }
  if (o.role == "eve-relay") {
    if (o.listen.empty() || o.connect.empty()) throw Error(ErrorCode::ConfigInvalid, "eve-relay needs --listen and --connect");
    auto l = listen();
    auto bob_side = connect();
    auto alice_side = l->accept();
    EveRelay eve(cfg);
    run_relay(*alice_side, *bob_side, eve);
    out << "relay done, " << eve.log().entries.size() << " observations\n";
    return kOk;
  }
  throw Error(ErrorCode::ConfigInvalid, "unknown role '" + o.role + "'");
}

}  // namespace bqkd::cli
