#include <benchmark/benchmark.h>

#include "ctms/checker.hpp"
#include "ctms/ct.hpp"
#include "ctms/lang.hpp"
#include "ctms/vc.hpp"

using namespace ctms;

static void BM_VcAndSimplify(benchmark::State& state) {
  auto p = instantiate_sum(1, 2, 1);
  for (auto _ : state) {
    auto pf = to_pure(vc_for_spec(p));
    benchmark::DoNotOptimize(pf);
  }
}
BENCHMARK(BM_VcAndSimplify);

static void BM_Extract(benchmark::State& state) {
  auto pf = *to_pure(vc_for_spec(instantiate_trav(2, 3, -2)));
  for (auto _ : state) {
    auto r = extract_ct_size(pf, "s");
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_Extract);

static void BM_CheckCT(benchmark::State& state) {
  auto p = instantiate_trav(3, 3, 1);
  CheckOptions o;
  for (auto _ : state) benchmark::DoNotOptimize(check(p, Mode::CT, o));
}
BENCHMARK(BM_CheckCT)->Unit(benchmark::kMicrosecond);

// oracle cost grows with the largest size checked
static void BM_CheckOracle(benchmark::State& state) {
  auto p = instantiate_trav(3, 3, 1);
  CheckOptions o;
  o.max_size = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(check(p, Mode::Oracle, o));
}
BENCHMARK(BM_CheckOracle)->Arg(10)->Arg(30)->Arg(100)->Unit(benchmark::kMicrosecond);

// the packaged benchmark_main archive is LTO bytecode from another compiler release
BENCHMARK_MAIN();
