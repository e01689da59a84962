#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "commands.hpp"

using namespace bqkd;

namespace {

std::string tmp(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("bqkd_cli_" + name)).string();
}

std::string write_cfg(const std::string& name, const std::string& body) {
  const auto p = tmp(name);
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("dimension lists") {
    CHECK(cli::parse_dims("4") == std::vector<int>{4});
    CHECK(cli::parse_dims("4:10") == std::vector<int>{4, 6, 8, 10});
    CHECK(cli::parse_dims("4,6,12") == std::vector<int>{4, 6, 12});
    CHECK_THROWS_AS(cli::parse_dims("x"), Error);
    CHECK_THROWS_AS(cli::parse_dims("8:4"), Error);
  }

  TEST_CASE("kgr tables") {
    std::ostringstream os;
    cli::KgrOptions o;
    o.dims = {4};
    CHECK(cli::cmd_kgr(o, os) == 0);
    CHECK(os.str().find("4\t1.1111\t1.0000\t1.1111") != std::string::npos);
    os.str("");
    o.dims = {6};
    cli::cmd_kgr(o, os);
    CHECK(os.str().find("6\t1.6402") != std::string::npos);
    os.str("");
    o.protocol = Protocol::BSQKD;
    o.dims = {4};
    o.q = 0.5;
    cli::cmd_kgr(o, os);
    CHECK(os.str().find("4\t0.6667") != std::string::npos);
  }

  TEST_CASE("verify-rules and its negative control") {
    std::ostringstream os;
    cli::VerifyOptions v;
    v.dims = cli::parse_dims("4:12");
    CHECK(cli::cmd_verify_rules(v, os) == 0);
    v.plant_corruption = true;
    v.dims = {6};
    std::ostringstream bad;
    CHECK(cli::cmd_verify_rules(v, bad) != 0);
    CHECK(bad.str().find("alice=B1[0] bob=B1[0]") != std::string::npos);
  }

  TEST_CASE("run exit codes and outputs") {
    std::ostringstream os;
    cli::RunOptions o;
    o.config = write_cfg("clean.json", R"({"protocol":"bqkd","dim":4,"rounds":3000,"seed":2})");
    o.report = tmp("clean.report.json");
    o.transcript = tmp("clean.jsonl");
    o.csv = tmp("clean.csv");
    CHECK(cli::cmd_run(o, os) == cli::kOk);
    std::ifstream rep(o.report);
    const auto j = nlohmann::json::parse(rep);
    CHECK(std::abs(j["deltas"]["kgr_no_check"].get<double>()) < 0.05);
    std::ifstream csv(o.csv);
    std::string header;
    std::getline(csv, header);
    CHECK(header == "l,p_detect_analytic,p_detect_empirical");

    o = {};
    o.config = write_cfg("sub.json",
                         R"({"protocol":"bqkd","dim":4,"rounds":2000,"seed":4,"check_fraction":0.5,)"
                         R"("eve":{"kind":"subspace","blocks":[[0,1],[2,3]]}})");
    CHECK(cli::cmd_run(o, os) == cli::kAbort);

    o.config = write_cfg("d2.json", R"({"protocol":"bqkd","dim":2,"rounds":10})");
    CHECK_THROWS_AS(cli::cmd_run(o, os), Error);

    // identity unitary written out for d=4, d_eve=1
    std::string m = "[";
    for (int i = 0; i < 4; ++i) {
      m += i ? ",[" : "[";
      for (int j = 0; j < 4; ++j) m += std::string(j ? "," : "") + (i == j ? "[1,0]" : "[0,0]");
      m += "]";
    }
    m += "]";
    o.config = write_cfg("id.json", R"({"protocol":"bqkd","dim":4,"rounds":3000,"seed":4,)"
                                    R"("eve":{"kind":"general","unitary":{"matrix":)" + m + R"(,"d_eve":1}}})");
    CHECK(cli::cmd_run(o, os) == cli::kOk);
  }

  TEST_CASE("trials") {
    std::ostringstream os;
    cli::RunOptions o;
    o.config = write_cfg("trials.json", R"({"protocol":"bqkd","dim":4,"rounds":300,"seed":1,"trials":4,)"
                                        R"("check_fraction":0.5,"eve":{"kind":"subspace","blocks":[[0,1],[2,3]]}})");
    o.jobs = 2;
    auto file = load_config(o.config);
    file.run.seed = 1;
    const auto t = cli::execute(file, 2);
    CHECK(t.runs.size() == 4);
    CHECK(t.json["trials"]["count"] == 4);
    CHECK(transcript_string(t.runs[1].records) != transcript_string(t.runs[2].records));
    const auto again = cli::execute(file, 1);
    CHECK(transcript_string(t.runs[3].records) == transcript_string(again.runs[3].records));
  }

  TEST_CASE("error mapping") {
    CHECK(cli::exit_code_for(Error(ErrorCode::TransportFailure, "x")) == cli::kTransport);
    CHECK(cli::exit_code_for(Error(ErrorCode::FramingError, "x")) == cli::kTransport);
    CHECK(cli::exit_code_for(Error(ErrorCode::ConfigInvalid, "x")) == cli::kUsage);
  }
}
