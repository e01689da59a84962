#include <benchmark/benchmark.h>

#include "bqkd/engine.hpp"
#include "bqkd/joint_state.hpp"
#include "bqkd/key_rules.hpp"
#include "bqkd/qudit.hpp"

namespace {

using bqkd::BasisId;

void BM_Rounds(benchmark::State& state) {
  bqkd::RunConfig cfg;
  cfg.protocol = static_cast<bqkd::Protocol>(state.range(0));
  cfg.dim = static_cast<int>(state.range(1));
  cfg.rounds = 10000;
  for (auto _ : state) {
    auto out = bqkd::run_in_process(cfg);
    benchmark::DoNotOptimize(out.sift.alice_key.data());
    ++cfg.seed;
  }
  state.SetItemsProcessed(state.iterations() * cfg.rounds);
}
BENCHMARK(BM_Rounds)
    ->ArgsProduct({{static_cast<long>(bqkd::Protocol::BQKD), static_cast<long>(bqkd::Protocol::BSQKD)}, {4, 16}})
    ->Unit(benchmark::kMillisecond);

void BM_Measure(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto fam = bqkd::build_bases(d);
  bqkd::Rng rng(7);
  int k = 0;
  for (auto _ : state) {
    bqkd::JointState s(fam.b1.vectors[static_cast<std::size_t>(k % d)]);
    benchmark::DoNotOptimize(s.measure_travel(fam.b2, rng));
    ++k;
  }
}
BENCHMARK(BM_Measure)->RangeMultiplier(2)->Range(4, 64);

// all (alice basis, index, bob basis, outcome) tuples for one d
void BM_SiftTable(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) {
    int kept = 0;
    for (auto a : {BasisId::B0, BasisId::B1, BasisId::B2})
      for (auto b : {BasisId::B0, BasisId::B1, BasisId::B2})
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) kept += bqkd::sift_symbol(d, a, i, b, j).kept();
    benchmark::DoNotOptimize(kept);
  }
}
BENCHMARK(BM_SiftTable)->Arg(4)->Arg(10)->Arg(32);

}  // namespace
BENCHMARK_MAIN();
