#include <benchmark/benchmark.h>

#include "macgan/decompositions.hpp"
#include "macgan/rng.hpp"

using namespace macgan;

static void BM_matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const Matrix a = random_normal(n, n, rng);
  const Matrix b = random_normal(n, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(matmul(a, b));
  state.SetItemsProcessed(state.iterations() * 2 * n * n * n);
}
BENCHMARK(BM_matmul)->RangeMultiplier(2)->Range(32, 512);

// Shape of a discriminator layer on a joint batch.
static void BM_matmul_layer(benchmark::State& state) {
  Rng rng(2);
  const Matrix w = random_normal(128, 128, rng);
  const Matrix x = random_normal(128, 512, rng);
  for (auto _ : state) benchmark::DoNotOptimize(matmul(w, x));
}
BENCHMARK(BM_matmul_layer);

static void BM_svd_values(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  const Matrix a = random_normal(n, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(svd_values(a));
}
BENCHMARK(BM_svd_values)->RangeMultiplier(2)->Range(16, 256)->Unit(benchmark::kMillisecond);

static void BM_cholesky(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(4);
  const Matrix z = random_normal(n, 2 * n, rng);
  Matrix a = matmul_nt(z, z);
  for (std::size_t i = 0; i < n; ++i) a(i, i) += 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(cholesky(a));
}
BENCHMARK(BM_cholesky)->RangeMultiplier(2)->Range(16, 256);
