#include <benchmark/benchmark.h>

#include "inspectra/generators.hpp"
#include "inspectra/horizon.hpp"
#include "inspectra/hull.hpp"
#include "inspectra/unfolding.hpp"

using namespace inspectra;

static void BM_HorizonExact(benchmark::State& state) {
  const Polyline c = baseball_curve(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(horizon(c).total);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_HorizonExact)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

static void BM_HorizonMc(benchmark::State& state) {
  const Polyline c = baseball_curve(200);
  for (auto _ : state) benchmark::DoNotOptimize(horizon_mc(c, state.range(0), 1).total);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HorizonMc)->Arg(10000)->Arg(100000);

static void BM_Hull3d(benchmark::State& state) {
  const Polyline c = random_inspection_curve(3, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(convex_hull_3d(c.vertices()).facets.size());
}
BENCHMARK(BM_Hull3d)->Arg(24)->Arg(96);

static void BM_ContainsUnitSphere(benchmark::State& state) {
  const Polyline c = baseball_curve(500);
  for (auto _ : state) {
    benchmark::DoNotOptimize(contains_unit_sphere(c.vertices(), static_cast<int>(state.range(0))).min_slack);
  }
}
BENCHMARK(BM_ContainsUnitSphere)->Arg(1000)->Arg(10000);

static void BM_UnfoldAndDecompose(benchmark::State& state) {
  const Polyline c = baseball_curve(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    const UnfoldedCurve u = unfold(c);
    benchmark::DoNotOptimize(spiral_decomposition(u).spirals.size());
  }
}
BENCHMARK(BM_UnfoldAndDecompose)->Arg(100)->Arg(500);
BENCHMARK_MAIN();
