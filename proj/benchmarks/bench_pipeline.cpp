#include <benchmark/benchmark.h>

#include <vector>

#include "cat5/verify.hpp"

using namespace cat5;

static std::vector<FiniteMetricSpace> samples(const char* kind, std::size_t n, int count) {
  std::vector<FiniteMetricSpace> out;
  for (int s = 0; static_cast<int>(out.size()) < count; ++s) {
    auto m = random_metric(kind, n, s);
    if (cat0_comparison_all(m).holds) out.push_back(std::move(m));
  }
  return out;
}

static void BM_Jacobi(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto form = associated_form(random_metric("tree", n, 1));
  for (auto _ : state) benchmark::DoNotOptimize(jacobi_eigen(form.b));
}
BENCHMARK(BM_Jacobi)->Arg(4)->Arg(8)->Arg(16);

static void BM_ComparisonAll(benchmark::State& state) {
  const auto m = random_metric("tree", static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(cat0_comparison_all(m));
}
BENCHMARK(BM_ComparisonAll)->Arg(5)->Arg(10)->Arg(16);

static void BM_EmbedFivePoints(benchmark::State& state) {
  const auto spaces = samples(state.range(0) ? "tree" : "euclidean_3", 5, 64);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(embed_five_points(spaces[i++ % spaces.size()]));
  state.SetLabel(state.range(0) ? "tree" : "euclidean_3");
}
BENCHMARK(BM_EmbedFivePoints)->Arg(0)->Arg(1);

static void BM_GammaFeasibleC4(benchmark::State& state) {
  const auto spaces = samples(state.range(0) ? "perturbed_tree" : "euclidean_3", 4, 64);
  const auto c4 = builtin_graph("C4");
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(gamma_feasible(c4, spaces[i++ % spaces.size()].distances()));
  state.SetLabel(state.range(0) ? "perturbed_tree" : "euclidean_3");
}
BENCHMARK(BM_GammaFeasibleC4)->Arg(0)->Arg(1);

static void BM_CycleImplication(benchmark::State& state) {
  const auto spaces = samples("general", 5, 16);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(cycle_implication_check(spaces[i++ % spaces.size()], 5));
}
BENCHMARK(BM_CycleImplication);

static void BM_GeodesicBounds(benchmark::State& state) {
  const auto spaces = samples("tree", 5, 200);
  const FiniteMetricSpace* chosen = nullptr;
  for (const auto& s : spaces)
    if (embed_five_points(s).complex.branch == Branch::MinkowskiLowerBoundary) {
      chosen = &s;
      break;
    }
  const auto cx = embed_five_points(*chosen).complex;
  for (auto _ : state) benchmark::DoNotOptimize(geodesic_upper_bounds(cx, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_GeodesicBounds)->Arg(4)->Arg(8)->Arg(16);

static void BM_Hunt(benchmark::State& state) {
  HuntConfig cfg;
  cfg.generator = parse_generator("general");
  cfg.budget = 500;
  for (auto _ : state) benchmark::DoNotOptimize(hunt_counterexamples(cfg, static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_Hunt)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
