#include <benchmark/benchmark.h>

#include "fsa/decoy.hpp"
#include "fsa/oracle.hpp"
#include "fsa/search.hpp"

namespace {

fsa::SystemParams at(double L) {
  fsa::SystemParams p;
  p.distance = L;
  return p;
}

void BM_RateQnd(benchmark::State& state) {
  const auto p = at(100.0);
  const fsa::QndAttack a{300.0, 310.0};
  for (auto _ : state) benchmark::DoNotOptimize(fsa::rate_under(p, a));
}
BENCHMARK(BM_RateQnd);

void BM_RatePnrd(benchmark::State& state) {
  const auto p = at(100.0);
  const fsa::PnrdAttack a{900.0, 1000.0, 0.1};
  for (auto _ : state) benchmark::DoNotOptimize(fsa::rate_under(p, a));
}
BENCHMARK(BM_RatePnrd);

void BM_TwoStageSearch(benchmark::State& state) {
  const auto p = at(100.0);
  for (auto _ : state) benchmark::DoNotOptimize(fsa::best_rate_two_stage(p, fsa::QndTemplate{}, 310.0));
}
BENCHMARK(BM_TwoStageSearch)->Unit(benchmark::kMicrosecond);

void BM_Kmin(benchmark::State& state) {
  const auto p = at(0.0);
  for (auto _ : state) benchmark::DoNotOptimize(fsa::k_min(p, 100.0));
}
BENCHMARK(BM_Kmin)->Unit(benchmark::kMillisecond);

void BM_Oracle(benchmark::State& state) {
  const auto p = at(50.0);
  const fsa::OracleConfig cfg{static_cast<std::uint64_t>(state.range(0)), 1, 16, 1};
  for (auto _ : state) benchmark::DoNotOptimize(fsa::simulate_pulses(p, fsa::QndAttack{300.0, 310.0}, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 2);
}
BENCHMARK(BM_Oracle)->Arg(100'000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
