#include <algorithm>
#include <random>
#include <sstream>

#include <doctest.h>

#include "../oracles/oracles.hpp"
#include "bqkd/analysis.hpp"
#include "bqkd/engine.hpp"
#include "bqkd/errors.hpp"

using namespace bqkd;
using doctest::Approx;

TEST_SUITE("analysis") {
  TEST_CASE("shannon entropy") {
    CHECK(shannon_entropy({0.5, 0.5}) == Approx(1.0));
    CHECK(shannon_entropy({1.0, 0.0}) == 0.0);
    CHECK((2.0 / 3.0) * shannon_entropy({0.5, 0.5}) == Approx(2.0 / 3.0));
    try {
      shannon_entropy({0.5, 0.6});
      FAIL("expected NotNormalized");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotNormalized);
    }
    CHECK_THROWS_AS(shannon_entropy({1.5, -0.5}), Error);

    std::mt19937_64 g(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double hmax = std::log2(6.0);
    for (int t = 0; t < 200; ++t) {
      std::vector<double> p(6);
      double s = 0;
      for (auto& x : p) s += (x = u(g));
      for (auto& x : p) x /= s;
      const double h = shannon_entropy(p);
      CHECK(h <= hmax + 1e-12);
      std::shuffle(p.begin(), p.end(), g);
      CHECK(shannon_entropy(p) == Approx(h).epsilon(1e-12));
    }
    CHECK(shannon_entropy(std::vector<double>(6, 1.0 / 6)) == Approx(hmax));
  }

  TEST_CASE("bqkd rates") {
    CHECK(kgr_bqkd(4).total == Approx(10.0 / 9.0).epsilon(1e-15));
    CHECK(kgr_bqkd(6).total == Approx(1.64).epsilon(0.005 / 1.64));
    CHECK(kgr_bqkd(8).total == Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(kgr_bqkd(7), Error);
    CHECK_THROWS_AS(kgr_bqkd(2), Error);
    for (int d = 4; d <= 32; d += 2) {
      const auto k = kgr_bqkd(d);
      double ps = 0, tot = 0;
      for (const auto& c : k.classes) {
        ps += c.probability;
        tot += c.probability * c.bits;
      }
      CHECK(k.classes.size() == 9);
      CHECK(ps == Approx(1.0));
      CHECK(tot == Approx(k.total));
    }
  }

  TEST_CASE("closed forms match exhaustive enumeration") {
    for (int d = 4; d <= 32; d += 2) {
      const auto o = oracle::enumerated_kgr(d);
      CHECK_MESSAGE(kgr_bqkd(d).total == Approx(o.entropy_bits).epsilon(1e-12), "d=" << d);
      CHECK_MESSAGE(kgr_bqkd_alphabet(d).total == Approx(o.alphabet_bits).epsilon(1e-12), "d=" << d);
    }
    // the two accountings split from d = 10 on
    CHECK(kgr_bqkd(6).total == Approx(kgr_bqkd_alphabet(6).total));
    CHECK(kgr_bqkd(10).total < kgr_bqkd_alphabet(10).total - 1e-3);
  }

  TEST_CASE("biased basis choice") {
    const std::vector<double> p{0.6, 0.2, 0.2};
    const auto k = kgr_bqkd(4, p, p);
    CHECK(k.total == Approx(0.36 * 2 + 0.04 * 2 * 2 + 4 * 0.12 * 1));
  }

  TEST_CASE("baselines and bsqkd") {
    CHECK(kgr_bb84(4) == Approx(1.0));
    CHECK(kgr_bb84(6) == Approx(1.2925).epsilon(1e-4));
    CHECK(kgr_bsqkd(4, 0.5) == Approx(2.0 / 3.0));
    CHECK(kgr_bsqkd(4, 0.75) == Approx(1.0));
    CHECK(kgr_sqkd07(2, 0.5) == Approx(0.25));
  }

  TEST_CASE("ratio curve") {
    std::vector<int> dims;
    for (int d = 4; d <= 32; d += 2) dims.push_back(d);
    const auto c = kgr_ratio_curve(dims);
    CHECK(c[0].ratio == Approx(10.0 / 9.0).epsilon(1e-4));
    CHECK(c[1].ratio == Approx(1.27).epsilon(0.005));
    CHECK(c[2].ratio == Approx(4.0 / 3.0).epsilon(1e-4));
    for (const auto& p : c) {
      CHECK(p.ratio > 1.0);
      CHECK(p.kgr_bqkd - p.kgr_bb84 > 0.0);
    }
    std::ostringstream os;
    write_ratio_csv(os, c);
    CHECK(os.str().rfind("d,kgr_bqkd,kgr_bb84,ratio\n4,1.111111,1.000000,1.111111\n", 0) == 0);
  }

  TEST_CASE("summaries") {
    RunConfig c;
    c.rounds = 20000;
    c.seed = 3;
    c.check_fraction = 0.01;
    auto out = run_in_process(c);
    auto r = summarize(out.records, c);
    CHECK_FALSE(r.aborted);
    CHECK(r.key_mismatches == 0);
    for (const auto& [cls, st] : r.qber_by_class) CHECK(st.errors == 0);
    CHECK(r.empirical_kgr_no_check == Approx(10.0 / 9.0).epsilon(0.03));
    CHECK(r.empirical_kgr < r.empirical_kgr_no_check);
    CHECK(r.delta == Approx(r.empirical_kgr - r.analytic_kgr));
    const auto j = to_json(r);
    for (const char* key : {"empirical_kgr", "qber_by_class", "detection_probability", "eve_correct_rate",
                            "analytic_kgr", "deltas"}) {
      CHECK(j.contains(key));
    }

    c.protocol = Protocol::BSQKD;
    out = run_in_process(c);
    r = summarize(out.records, c);
    CHECK(r.empirical_kgr_no_check == Approx(2.0 / 3.0).epsilon(0.03));
  }

  TEST_CASE("subspace attack only disturbs the (B2,B2) class") {
    RunConfig c;
    c.rounds = 40000;
    c.seed = 5;
    c.eve = SubspaceAttack{{{0, 1}, {2, 3}}};
    const auto out = run_in_process(c);
    const auto r = summarize(out.records, c);
    CHECK(r.aborted);
    for (const auto& [cls, st] : r.error_by_class) {
      if (cls == RoundClass{BasisId::B2, BasisId::B2}) {
        CHECK(st.rate() == Approx(0.5).epsilon(0.06));
      } else {
        CHECK(st.errors == 0);
      }
    }
    for (const auto& curve : r.detection) {
      if (curve.cls != RoundClass{BasisId::B2, BasisId::B2}) continue;
      CHECK(curve.p_round == Approx(0.5));
      CHECK(curve.points[2].analytic == Approx(0.875));
    }
    std::ostringstream os;
    write_detection_csv(os, r.detection);
    CHECK(os.str().rfind("l,p_detect_analytic,p_detect_empirical\n", 0) == 0);
  }
}
