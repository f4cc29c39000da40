#include <benchmark/benchmark.h>

#include "macgan/measures.hpp"
#include "macgan/relation.hpp"
#include "macgan/rng.hpp"

using namespace macgan;

namespace {

std::vector<int> labels(std::size_t n, Rng& rng) {
  std::vector<int> l(n);
  for (int& v : l) v = static_cast<int>(rng.below(8));
  return l;
}

}  // namespace

static void BM_l_mac_grads_supervised(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const FeatureBatch z(random_normal(32, n, rng));
  const FeatureBatch zg(random_normal(32, n, rng), SampleSource::Generated);
  const auto lr = labels(n, rng);
  const auto lg = labels(n, rng);
  std::vector<int> lj(lr);
  lj.insert(lj.end(), lg.begin(), lg.end());
  const RelationMatrix c = supervised_relation(lr);
  const RelationMatrix cg = supervised_relation(lg);
  const RelationMatrix cj = supervised_relation(lj);
  for (auto _ : state) benchmark::DoNotOptimize(l_mac_grads(z, zg, c, cg, cj));
}
BENCHMARK(BM_l_mac_grads_supervised)->Arg(64)->Arg(256);

static void BM_l_mac_logdet_singletons(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  const Matrix z = random_normal(128, n, rng);
  const Matrix zg = random_normal(128, n, rng);
  const Matrix rows = singleton_membership_rows(n);
  const Matrix joint = singleton_membership_rows(2 * n);
  for (auto _ : state) benchmark::DoNotOptimize(l_mac_logdet(z, zg, rows, rows, joint, 0.5));
}
BENCHMARK(BM_l_mac_logdet_singletons)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_relation_forward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  MlpNetwork f = build_relation_net(128, 32, rng);
  const FeatureBatch z(random_normal(128, n, rng));
  for (auto _ : state) benchmark::DoNotOptimize(relation_forward(f, z));
}
BENCHMARK(BM_relation_forward)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_prior_relation(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(4);
  const FeatureBatch e(random_normal(3, n, rng));
  for (auto _ : state) benchmark::DoNotOptimize(prior_relation(e, 1.0));
}
BENCHMARK(BM_prior_relation)->Arg(64)->Arg(512);
