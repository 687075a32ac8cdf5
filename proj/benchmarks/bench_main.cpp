// Hot-path benchmarks: sampling, fitting and the scan loops that dominate a
// pipeline run.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "finscale/dist.hpp"
#include "finscale/facmom.hpp"
#include "finscale/gaps.hpp"
#include "finscale/hurst.hpp"
#include "finscale/rng.hpp"
#include "finscale/series.hpp"
#include "finscale/synth.hpp"

using namespace finscale;

namespace {

ReturnSeries t3_returns(std::size_t n, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.model = Model::kStudentTIid;
  spec.nu = 3.0;
  spec.n = n;
  spec.seed = seed;
  return gen_iid(spec);
}

void BM_GenFbm(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(gen_fbm(0.7, n, seed++));
  state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(n));
}
BENCHMARK(BM_GenFbm)->Arg(1 << 12)->Arg(1 << 16);

void BM_FitStudentT(benchmark::State& state) {
  const ReturnSeries rs = normalize(t3_returns(static_cast<std::size_t>(state.range(0)), 3));
  for (auto _ : state) benchmark::DoNotOptimize(fit_student_t(rs));
  state.SetItemsProcessed(int64_t(state.iterations()) * state.range(0));
}
BENCHMARK(BM_FitStudentT)->Arg(10000)->Arg(100000);

void BM_FacmomScan(benchmark::State& state) {
  const ReturnSeries rs = t3_returns(static_cast<std::size_t>(state.range(0)), 5);
  for (auto _ : state)
    benchmark::DoNotOptimize(facmom_scan(rs, 200, {1, 2, 4, 10, 20}, {50, 100}));
  state.SetItemsProcessed(int64_t(state.iterations()) * state.range(0));
}
BENCHMARK(BM_FacmomScan)->Arg(100000)->Arg(1000000);

void BM_GapDistribution(benchmark::State& state) {
  const ReturnSeries rs = t3_returns(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state)
    benchmark::DoNotOptimize(gap_distribution(rs, GapDirection::kNegative));
  state.SetItemsProcessed(int64_t(state.iterations()) * state.range(0));
}
BENCHMARK(BM_GapDistribution)->Arg(1000000);

void BM_StructureFunction(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const std::vector<double> path = gen_fbm(0.5, n, 9);
  const std::vector<std::size_t> taus = default_taus(n);
  for (auto _ : state) benchmark::DoNotOptimize(structure_function(path, taus, 2.0));
  state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(n));
}
BENCHMARK(BM_StructureFunction)->Arg(1 << 14)->Arg(1 << 16);

void BM_SimulateSde(benchmark::State& state) {
  DriftDiffusion dd;
  dd.case_ = 3;
  dd.nu = 3.0;
  std::uint64_t seed = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        simulate_sde(dd, 0.02, static_cast<std::size_t>(state.range(0)), seed++));
  state.SetItemsProcessed(int64_t(state.iterations()) * state.range(0));
}
BENCHMARK(BM_SimulateSde)->Arg(100000);

void BM_StationaryDensity(benchmark::State& state) {
  DriftDiffusion dd;
  dd.case_ = 3;
  dd.nu = 3.0;
  const std::vector<double> grid = uniform_grid(-10.0, 10.0, 4001);
  for (auto _ : state) benchmark::DoNotOptimize(stationary_density(dd, grid));
}
BENCHMARK(BM_StationaryDensity);

}  // namespace

BENCHMARK_MAIN();
