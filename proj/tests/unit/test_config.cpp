#include <cstdlib>

#include <doctest.h>

#include "bqkd/config.hpp"
#include "bqkd/errors.hpp"

using namespace bqkd;
using nlohmann::json;

TEST_SUITE("config") {
  TEST_CASE("minimal and full documents") {
    auto f = parse_config(json::parse(R"({"protocol":"bqkd","dim":6})"));
    CHECK(f.run.dim == 6);
    CHECK(f.trials == 1);
    CHECK_FALSE(f.seed.has_value());

    f = parse_config(json::parse(R"({
      "protocol":"bsqkd","dim":4,"rounds":100,"seed":9,"bob_measure_prob":0.75,"check_fraction":0.2,
      "abort_qber_threshold":0.1,"alice_basis_probs":[0.5,0.25,0.25],"trials":3,
      "eve":{"kind":"two_way","forward":{"seed":3,"d_eve":2},"backward":{"seed":4}},
      "output":{"report":"r.json","transcript":"t.jsonl","csv":"d.csv"}})"));
    CHECK(f.run.protocol == Protocol::BSQKD);
    CHECK(f.seed == 9u);
    CHECK(f.trials == 3);
    CHECK(f.outputs.csv == "d.csv");
    const auto& tw = std::get<TwoWayEntangle>(f.run.eve);
    CHECK(tw.forward.d_eve() == 2);
    CHECK(tw.backward.d_eve() == 4);
    CHECK(tw.forward.sum_rule_violation() < 1e-9);
  }

  TEST_CASE("eve kinds") {
    CHECK(std::holds_alternative<SubspaceAttack>(parse_eve(json::parse(R"({"kind":"subspace","blocks":[[0,1],[2,3]]})"), 4)));
    CHECK(std::get<InterceptResend>(parse_eve(json::parse(R"({"kind":"intercept_resend","bases":["B0","B2"]})"), 4))
              .bases.size() == 2);
    CHECK(std::holds_alternative<EntangleMeasureCopy>(parse_eve(json::parse(R"({"kind":"copy"})"), 4)));
    CHECK(std::holds_alternative<NoEve>(parse_eve(json::parse(R"({"kind":"none"})"), 4)));
    // explicit 2x2 identity on d=2, d_eve=1
    const auto g = parse_eve(json::parse(R"({"kind":"general","unitary":{"matrix":[[[1,0],[0,0]],[[0,0],[1,0]]],"d_eve":1}})"), 2);
    CHECK(std::get<GeneralEntangle>(g).map.at(1, 1)(0) == Complex(1, 0));
  }

  TEST_CASE("rejections") {
    for (const char* doc : {R"({"protocol":"bqkd","dim":4,"colour":"red"})", R"({"protocol":"x"})",
                            R"({"protocol":"bqkd","dim":5})", R"({"protocol":"bqkd","eve":{"kind":"magic"}})",
                            R"({"protocol":"bqkd","eve":{"kind":"general","unitary":{"seed":1,"matrix":[]}}})",
                            R"({"protocol":"bqkd","eve":{"kind":"subspace","blocks":[[0,1],[2]]}})",
                            R"({"protocol":"bqkd","output":{"pdf":"x"}})", R"({"protocol":"bqkd","rounds":0})"}) {
      CHECK_THROWS_AS(parse_config(json::parse(doc)), Error);
    }
    try {
      parse_config(json::parse(R"({"protocol":"bqkd","dim":4,"colour":"red"})"));
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ConfigInvalid);
    }
    CHECK_THROWS_AS(load_config("/nonexistent/cfg.json"), Error);
  }

  TEST_CASE("hash and seed precedence") {
    RunConfig a;
    RunConfig b;
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    b.rounds = 1001;
    CHECK(config_hash(a) != config_hash(b));
    const auto j = to_json(a);
    CHECK(j["protocol"] == "bqkd");

    ::unsetenv("BQKD_SEED");
    CHECK(resolve_seed(std::nullopt, std::nullopt) == 1);
    ::setenv("BQKD_SEED", "55", 1);
    CHECK(resolve_seed(std::nullopt, std::nullopt) == 55);
    CHECK(resolve_seed(std::nullopt, 7) == 7);
    CHECK(resolve_seed(3, 7) == 3);
    ::unsetenv("BQKD_SEED");
  }
}
