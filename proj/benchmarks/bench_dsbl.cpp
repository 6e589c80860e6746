#include <benchmark/benchmark.h>

#include <unsupported/Eigen/KroneckerProduct>

#include "kronsbl/dsbl.hpp"
#include "kronsbl/omp.hpp"
#include "kronsbl/scenarios.hpp"

using namespace kronsbl;

namespace {

struct Problem {
  KronSparseScene scene;
  CVector y;
  double noise_variance;
  SblConfig sbl;
};

CMatrix full_dictionary(const std::vector<CMatrix>& parts) {
  CMatrix out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    CMatrix next = Eigen::kroneckerProduct(out, parts[i]);
    out.swap(next);
  }
  return out;
}

Problem problem(Index m) {
  Rng rng(11);
  Problem p{gen_kron_sparse(m, rng), {}, 0.0, {}};
  const NoisyMeasurement n = add_noise_at_snr(p.scene.truth.clean, 20.0, rng);
  p.y = n.y;
  p.noise_variance = n.noise_variance;
  p.sbl.grid_points = static_cast<Index>(p.scene.grid.size());
  p.sbl.grid_update = false;
  p.sbl.record_traces = false;
  return p;
}

void BM_Dsbl(benchmark::State& state) {
  const Problem p = problem(state.range(0));
  DsblConfig dc;
  dc.per_dimension = {p.sbl};
  const std::vector<ColumnFunction> cols(3, ColumnFunction::steering(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_dsbl(p.y, p.scene.truth.shape, cols, dc));
}

void BM_FullSbl(benchmark::State& state) {
  const Problem p = problem(state.range(0));
  const CMatrix full = full_dictionary(p.scene.dictionaries);
  SblConfig c = p.sbl;
  c.noise_denominator = NoiseDenominator::measurement_count;
  for (auto _ : state) benchmark::DoNotOptimize(run_sbl(p.y, full, c));
}

void BM_FullOmp(benchmark::State& state) {
  const Problem p = problem(state.range(0));
  const CMatrix full = full_dictionary(p.scene.dictionaries);
  OmpConfig oc;
  oc.residual_threshold = static_cast<double>(p.y.size()) * p.noise_variance;
  for (auto _ : state) benchmark::DoNotOptimize(omp(p.y, full, oc));
}

}  // namespace

BENCHMARK(BM_Dsbl)->Arg(6)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FullSbl)->Arg(6)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FullOmp)->Arg(6)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
