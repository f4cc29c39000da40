#include <benchmark/benchmark.h>

#include "macgan/trainer.hpp"

using namespace macgan;

// Cost of one iteration, measured over short runs.
static void BM_train_iterations(benchmark::State& state) {
  const SyntheticDataset ds{DatasetSpec{}};
  GanConfig cfg;
  cfg.iterations = 20;
  cfg.log_interval = 1000;
  cfg.lambda = cfg.gamma = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(train(cfg, ds));
  state.SetItemsProcessed(state.iterations() * cfg.iterations);
}
BENCHMARK(BM_train_iterations)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_train_baseline_iterations(benchmark::State& state) {
  const SyntheticDataset ds{DatasetSpec{}};
  GanConfig cfg;
  cfg.iterations = 20;
  cfg.log_interval = 1000;
  for (auto _ : state) benchmark::DoNotOptimize(train_baseline(cfg, ds));
  state.SetItemsProcessed(state.iterations() * cfg.iterations);
}
BENCHMARK(BM_train_baseline_iterations)->Unit(benchmark::kMillisecond);

static void BM_mlp_forward_backward(benchmark::State& state) {
  Rng rng(1);
  const std::size_t widths[] = {3, 128, 128, 128, 1};
  MlpNetwork net = MlpNetwork::build(widths, Activation::LeakyReLU, Activation::Identity, rng);
  const Matrix x = random_normal(3, 512, rng);
  const Matrix up = random_normal(1, 512, rng);
  for (auto _ : state) {
    net.forward(x);
    benchmark::DoNotOptimize(net.backward(up));
  }
}
BENCHMARK(BM_mlp_forward_backward)->Unit(benchmark::kMillisecond);
