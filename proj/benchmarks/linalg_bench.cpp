#include <benchmark/benchmark.h>

#include "qdis/linalg.hpp"

namespace {

using namespace qdis;

// Single-qubit gate on the middle qubit of an n-qubit register.
void BM_ApplyUnitaryOneQubit(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const StateVector s = random_state(Dims(n, 2), rng);
  const UnitaryMatrix u = haar_random_unitary(2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(apply_unitary(u, s, {n / 2}));
  state.SetComplexityN(static_cast<std::int64_t>(s.dimension()));
}
BENCHMARK(BM_ApplyUnitaryOneQubit)->DenseRange(6, 14, 4)->Complexity();

void BM_PartialTraceStateVector(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  const StateVector s = random_state(Dims(n, 2), rng);
  for (auto _ : state) benchmark::DoNotOptimize(partial_trace(s, {0, 1}));
}
BENCHMARK(BM_PartialTraceStateVector)->DenseRange(6, 14, 4);

void BM_HaarUnitary(benchmark::State& state) {
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(haar_random_unitary(static_cast<std::size_t>(state.range(0)), rng));
}
BENCHMARK(BM_HaarUnitary)->RangeMultiplier(4)->Range(8, 128);

}  // namespace
