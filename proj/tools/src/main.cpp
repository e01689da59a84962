#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace bqkd;

int main(int argc, char** argv) {
  CLI::App app{"bqkd: boosted QKD / SQKD simulator"};
  app.require_subcommand(1);

  cli::KgrOptions kgr;
  std::string kgr_dim = "4", kgr_range, kgr_protocol = "bqkd";
  auto* k = app.add_subcommand("kgr", "closed-form key generation rates");
  k->add_option("--dim", kgr_dim, "dimension or list, e.g. 4 or 4,6,8");
  k->add_option("--dim-range", kgr_range, "even range lo:hi");
  k->add_option("--protocol", kgr_protocol, "bqkd | bsqkd | bb84 | sqkd07")->capture_default_str();
  k->add_option("--q", kgr.q, "Bob's measure probability (two-way protocols)")->capture_default_str();
  k->add_option("--csv", kgr.csv, "write d,kgr_bqkd,kgr_bb84,ratio (bqkd only)");

  cli::RunOptions run;
  std::uint64_t run_seed = 0;
  int run_trials = 0;
  auto* r = app.add_subcommand("run", "run a config in-process");
  r->add_option("config", run.config, "JSON config")->required()->check(CLI::ExistingFile);
  auto* rs = r->add_option("--seed", run_seed, "master seed (overrides config and BQKD_SEED)");
  r->add_option("--report", run.report, "report JSON path");
  r->add_option("--transcript", run.transcript, "transcript path (first trial)");
  r->add_option("--csv", run.csv, "detection curve CSV: l,p_detect_analytic,p_detect_empirical");
  auto* rt = r->add_option("--trials", run_trials, "independent repetitions")->check(CLI::PositiveNumber);
  r->add_option("--jobs", run.jobs, "parallel repetitions")->check(CLI::PositiveNumber)->capture_default_str();

  cli::VerifyOptions verify;
  std::string verify_dims = "4:12";
  auto* v = app.add_subcommand("verify-rules", "exhaustive sifting-rule and golden-table check");
  v->add_option("--dims", verify_dims, "even dimensions, lo:hi or list")->capture_default_str();
  v->add_flag("--plant-corruption", verify.plant_corruption, "flip one rule entry (negative control)");

  cli::PartyOptions party;
  std::uint64_t party_seed = 0;
  auto* p = app.add_subcommand("party", "one party of a socket-mode run");
  p->add_option("--role", party.role, "alice | bob | eve-relay")
      ->required()
      ->check(CLI::IsMember({"alice", "bob", "eve-relay"}));
  p->add_option("--config", party.config, "JSON config (same on every party)")->required()->check(CLI::ExistingFile);
  auto* ps = p->add_option("--seed", party_seed, "master seed");
  p->add_option("--listen", party.listen, "host:port to accept on (bob, eve-relay); port 0 picks one");
  p->add_option("--connect", party.connect, "host:port of the next hop (alice, eve-relay)");
  p->add_option("--port-file", party.port_file, "write the bound port here");
  p->add_option("--report", party.report, "report JSON path (alice)");
  p->add_option("--transcript", party.transcript, "transcript path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kUsage;
  }

  try {
    if (*k) {
      kgr.dims = cli::parse_dims(kgr_range.empty() ? kgr_dim : kgr_range);
      const auto proto = parse_protocol(kgr_protocol);
      if (!proto) throw Error(ErrorCode::ConfigInvalid, "unknown protocol " + kgr_protocol);
      kgr.protocol = *proto;
      return cli::cmd_kgr(kgr, std::cout);
    }
    if (*r) {
      if (*rs) run.seed = run_seed;
      if (*rt) run.trials = run_trials;
      return cli::cmd_run(run, std::cout);
    }
    if (*v) {
      verify.dims = cli::parse_dims(verify_dims);
      return cli::cmd_verify_rules(verify, std::cout);
    }
    if (*p) {
      if (*ps) party.seed = party_seed;
      return cli::cmd_party(party, std::cout);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kUsage;
  }
  return cli::kUsage;
}
