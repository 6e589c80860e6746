#include <benchmark/benchmark.h>

#include "kronsbl/offsbl.hpp"
#include "kronsbl/scenarios.hpp"

using namespace kronsbl;

namespace {

void BM_OffSbl(benchmark::State& state) {
  Rng rng(7);
  const OffgridScene sc = gen_offgrid_scene(state.range(0), 3, rng);
  const NoisyMeasurement y = add_noise_at_snr(sc.truth.clean, 20.0, rng);
  SblConfig cfg;
  cfg.top_peaks = 3;
  cfg.max_em_iters = 50;
  cfg.record_traces = false;
  for (auto _ : state) benchmark::DoNotOptimize(run_offsbl(y.y, sc.column, cfg));
}

void BM_OnGridSbl(benchmark::State& state) {
  Rng rng(7);
  const OffgridScene sc = gen_offgrid_scene(state.range(0), 3, rng);
  const NoisyMeasurement y = add_noise_at_snr(sc.truth.clean, 20.0, rng);
  SblConfig cfg;
  cfg.grid_update = false;
  cfg.max_em_iters = 50;
  cfg.record_traces = false;
  for (auto _ : state) benchmark::DoNotOptimize(run_offsbl(y.y, sc.column, cfg));
}

}  // namespace

BENCHMARK(BM_OffSbl)->Arg(20)->Arg(40)->Arg(60)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OnGridSbl)->Arg(20)->Arg(40)->Arg(60)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
