// Serial reference kernels against their OpenMP twins.
#include <benchmark/benchmark.h>

#include "transportq/kernels.h"
#include "transportq/random.h"
#include "transportq/transport.h"

namespace {

using namespace transportq;

std::vector<ComplexMatrix> random_unitaries(std::size_t count, std::size_t n) {
  CounterRng rng(7);
  std::vector<ComplexMatrix> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(matrix_exp(random_hermitian(rng, n).matrix() * cplx{0.0, 1.0}));
  }
  return out;
}

void BM_GemmSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  CounterRng rng(1);
  const ComplexMatrix a = random_matrix(rng, n, n);
  const ComplexMatrix b = random_matrix(rng, n, n);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::gemm_serial(a, b));
}

void BM_GemmParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  CounterRng rng(1);
  const ComplexMatrix a = random_matrix(rng, n, n);
  const ComplexMatrix b = random_matrix(rng, n, n);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::gemm_parallel(a, b));
}

void BM_ConjugateBatchSerial(benchmark::State& state) {
  const auto ops = random_unitaries(static_cast<std::size_t>(state.range(0)), 4);
  CounterRng rng(2);
  const ComplexMatrix a = random_hermitian(rng, 4).matrix();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::conjugate_batch_serial(ops, a));
}

void BM_ConjugateBatchParallel(benchmark::State& state) {
  const auto ops = random_unitaries(static_cast<std::size_t>(state.range(0)), 4);
  CounterRng rng(2);
  const ComplexMatrix a = random_hermitian(rng, 4).matrix();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::conjugate_batch_parallel(ops, a));
}

void BM_UnitarityBatchSerial(benchmark::State& state) {
  const auto ops = random_unitaries(static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::unitarity_defect_batch_serial(ops));
}

void BM_UnitarityBatchParallel(benchmark::State& state) {
  const auto ops = random_unitaries(static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::unitarity_defect_batch_parallel(ops));
}

void BM_TransportMagnus4(benchmark::State& state) {
  const auto path = HamiltonianPath::pauli_sum({PathTerm{Polynomial{{1.0}}, HermitianMatrix(pauli::z())},
                                                PathTerm{Polynomial{{0.0, 1.0}}, HermitianMatrix(pauli::x())}});
  const int steps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(transport(path, 0.0, 1.0, steps, Method::magnus4));
}

}  // namespace

BENCHMARK(BM_GemmSerial)->Arg(16)->Arg(64)->Arg(128);
BENCHMARK(BM_GemmParallel)->Arg(16)->Arg(64)->Arg(128);
BENCHMARK(BM_ConjugateBatchSerial)->Arg(256)->Arg(4096);
BENCHMARK(BM_ConjugateBatchParallel)->Arg(256)->Arg(4096);
BENCHMARK(BM_UnitarityBatchSerial)->Arg(256)->Arg(4096);
BENCHMARK(BM_UnitarityBatchParallel)->Arg(256)->Arg(4096);
BENCHMARK(BM_TransportMagnus4)->Arg(256)->Arg(4096);

BENCHMARK_MAIN();
