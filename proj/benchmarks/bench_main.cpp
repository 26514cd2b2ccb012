#include <benchmark/benchmark.h>

#include "sidebp/bp.hpp"
#include "sidebp/density.hpp"
#include "sidebp/random.hpp"
#include "sidebp/sampling.hpp"
#include "sidebp/tree_monte_carlo.hpp"

using namespace sidebp;

namespace {

const LabelModel kLabels = LabelModel::noisy(0.85);

void BM_SampleSbm(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  const auto params = params_from_scaling({0.5, 0.8, 0.2}, n);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_sbm(params, kLabels, ++seed));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_SampleSbm)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_RunBp(benchmark::State& state) {
  const auto params = params_from_scaling({0.5, 0.8, 0.2}, 100000);
  const auto g = sample_sbm(params, kLabels, 1);
  bp::BpConfig config;
  config.depth = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bp::run_bp(g, params, kLabels, config));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.num_slots()) * state.range(0));
}
BENCHMARK(BM_RunBp)->Arg(1)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_BigG(benchmark::State& state) {
  density::DensityParams params;
  params.p = 0.05;
  params.lambda = 0.8;
  params.labels = kLabels;
  params.quadrature.nodes = static_cast<std::uint32_t>(state.range(0));
  double alpha = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(density::big_g(alpha, params));
    alpha = alpha > 16.0 ? 0.0 : alpha + 0.01;
  }
}
BENCHMARK(BM_BigG)->Arg(201)->Arg(2001);

void BM_TreeSampler(benchmark::State& state) {
  const auto params = params_from_scaling({0.5, 0.8, 0.05}, std::uint64_t{1} << 40);  // d = 320
  const TreeStatisticSampler sampler(params, kLabels, static_cast<std::uint32_t>(state.range(0)));
  Rng rng = make_rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(sampler(kPlus, rng));
}
BENCHMARK(BM_TreeSampler)->Arg(1)->Arg(2);

}  // namespace

BENCHMARK_MAIN();
