#include <benchmark/benchmark.h>

#include "pplnhom/biphoton.hpp"
#include "pplnhom/config.hpp"
#include "pplnhom/detection.hpp"
#include "pplnhom/hom.hpp"
#include "pplnhom/qpm.hpp"

using namespace pplnhom;

namespace {

const RunConfig& config() {
  static const RunConfig c = default_run_config();
  return c;
}

void BM_SolvePair(benchmark::State& state) {
  auto spec = config().waveguide;
  spec.temperature_c = 70.0;
  for (auto _ : state) benchmark::DoNotOptimize(solve_pair(spec));
}
BENCHMARK(BM_SolvePair)->Unit(benchmark::kMicrosecond);

void BM_BuildState(benchmark::State& state) {
  GridOptions grid;
  grid.points = static_cast<std::size_t>(state.range(0));
  grid.mismatch = state.range(1) ? MismatchModel::kExact : MismatchModel::kLinearized;
  for (auto _ : state) benchmark::DoNotOptimize(build_state(config().waveguide, grid));
}
BENCHMARK(BM_BuildState)->Args({4096, 0})->Args({4096, 1})->Args({16384, 0})->Unit(benchmark::kMicrosecond);

void BM_HomScan(benchmark::State& state) {
  auto spec = config().waveguide;
  spec.temperature_c = 73.0;
  const auto s = build_state(spec);
  for (auto _ : state)
    benchmark::DoNotOptimize(scan_around_compensation(s, 10e-3, 5e-6, config().hom.indistinguishability));
  state.SetItemsProcessed(state.iterations() * 4001);
}
BENCHMARK(BM_HomScan)->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& state) {
  MonteCarloOptions opt;
  opt.duration_s = static_cast<double>(state.range(0));
  const auto& c = config();
  for (auto _ : state)
    benchmark::DoNotOptimize(monte_carlo(c.source.pair_rate_hz, c.losses, c.detector_a, c.detector_b, opt));
}
BENCHMARK(BM_MonteCarlo)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
