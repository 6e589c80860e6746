#include <benchmark/benchmark.h>

#include "kronsbl/decomposition.hpp"
#include "kronsbl/scenarios.hpp"

using namespace kronsbl;

namespace {

CVector measurement(Index m) {
  Rng rng(1);
  const KronSparseScene sc = gen_kron_sparse(m, rng);
  return add_noise_at_snr(sc.truth.clean, 20.0, rng).y;
}

void BM_Decompose(benchmark::State& state, DecompositionMethod method) {
  const Index m = state.range(0);
  const CVector y = measurement(m);
  const Shape shape{m, m, m};
  for (auto _ : state) benchmark::DoNotOptimize(decompose(y, shape, method));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Decompose, hosvd, DecompositionMethod::hosvd)->Arg(6)->Arg(10)->Arg(16)->Arg(24);
BENCHMARK_CAPTURE(BM_Decompose, recursive, DecompositionMethod::recursive)->Arg(6)->Arg(10)->Arg(16)->Arg(24);

BENCHMARK_MAIN();
