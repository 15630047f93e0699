#include <benchmark/benchmark.h>

#include <cmath>

#include "barrierwalk/barrierwalk.hpp"

namespace bw = barrierwalk;

static void BM_ExactDensityPoisson(benchmark::State& state) {
  const auto dist = bw::make_centered_poisson();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bw::exact_density(dist, n, 1e-13));
  state.SetComplexityN(n);
}
BENCHMARK(BM_ExactDensityPoisson)->RangeMultiplier(4)->Range(64, 4096)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_RtildePoisson(benchmark::State& state) {
  const auto dist = bw::make_centered_poisson();
  const int n = static_cast<int>(state.range(0));
  const double y = std::sqrt(static_cast<double>(n)) / 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(bw::rtilde_exact(dist, n, y));
  state.SetComplexityN(n);
}
BENCHMARK(BM_RtildePoisson)->RangeMultiplier(4)->Range(64, 4096)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_RtildeBernoulli(benchmark::State& state) {
  const auto dist = bw::make_bernoulli();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bw::rtilde_exact(dist, n, 4.0));
}
BENCHMARK(BM_RtildeBernoulli)->RangeMultiplier(4)->Range(64, 4096)->Unit(benchmark::kMillisecond);

static void BM_Recur2(benchmark::State& state) {
  const auto dist = bw::make_centered_poisson();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    bw::BarrierCache cache(dist);
    benchmark::DoNotOptimize(bw::check_recur2(cache, n, 0.0, 4.0, 4.0));
  }
}
BENCHMARK(BM_Recur2)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_McTnCdf(benchmark::State& state) {
  const auto dist = bw::make_bernoulli();
  const auto trials = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bw::mc_tn_cdf(dist, 1024, 32.0, trials, 1));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * state.range(0)));
}
BENCHMARK(BM_McTnCdf)->Arg(10'000)->Unit(benchmark::kMillisecond);

static void BM_McQnuv(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(bw::mc_qnuv(100, 5, 100, 10'000, 1));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * 10'000));
}
BENCHMARK(BM_McQnuv)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
