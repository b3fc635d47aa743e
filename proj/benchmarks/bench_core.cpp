#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "phasereg/frechet.hpp"
#include "phasereg/registration.hpp"
#include "phasereg/simulation.hpp"
#include "phasereg/smoothing.hpp"
#include "phasereg/transport.hpp"

using namespace phasereg;

namespace {

PointPattern uniform_pattern(std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> pts(m);
  for (double& x : pts) x = u(rng);
  return PointPattern(kUnitInterval, std::move(pts));
}

void BM_SmoothPattern(benchmark::State& state) {
  const PointPattern p = uniform_pattern(static_cast<std::size_t>(state.range(0)), 1);
  const KernelSpec kernel(0.05);
  for (auto _ : state) benchmark::DoNotOptimize(smooth_pattern(p, kernel));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SmoothPattern)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_Wasserstein2Diffuse(benchmark::State& state) {
  const auto a = smooth_pattern(uniform_pattern(100, 2), KernelSpec(0.05));
  const auto b = smooth_pattern(uniform_pattern(100, 3), KernelSpec(0.05));
  for (auto _ : state) benchmark::DoNotOptimize(wasserstein2(a, b));
}
BENCHMARK(BM_Wasserstein2Diffuse);

void BM_Wasserstein2Empirical(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const EmpiricalMeasure a(uniform_pattern(m, 4));
  const EmpiricalMeasure b(uniform_pattern(m, 5));
  for (auto _ : state) benchmark::DoNotOptimize(wasserstein2(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Wasserstein2Empirical)->RangeMultiplier(8)->Range(8, 32768)->Complexity();

void BM_Barycenter(benchmark::State& state) {
  std::vector<DiffuseMeasure> measures;
  for (int i = 0; i < state.range(0); ++i) {
    measures.push_back(smooth_pattern(uniform_pattern(93, 10 + i), KernelSpec(0.05)));
  }
  for (auto _ : state) benchmark::DoNotOptimize(barycenter(measures));
}
BENCHMARK(BM_Barycenter)->Arg(10)->Arg(30)->Arg(100);

void BM_Pipeline(benchmark::State& state) {
  BimodalScenarioConfig config;
  config.n = static_cast<std::size_t>(state.range(0));
  const ScenarioData data = simulate_scenario(config);
  for (auto _ : state) benchmark::DoNotOptimize(pipeline(data.warped));
}
BENCHMARK(BM_Pipeline)->Arg(30)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
