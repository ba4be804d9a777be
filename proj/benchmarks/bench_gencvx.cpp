#include <benchmark/benchmark.h>

#include "gencvx/campaign.hpp"
#include "gencvx/characterizations.hpp"
#include "gencvx/corpus.hpp"
#include "gencvx/expression.hpp"
#include "gencvx/nonsmooth.hpp"

namespace {

using namespace gencvx;

const CorpusEntry& fractional() {
  static const CorpusEntry e = *find_corpus_entry("fractional");
  return e;
}

void BM_Parse(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parse("sqrt(x1*x1 + 1) - log(2 + x2) * atan(x2) / max(x1, 0.5)", 2));
}
BENCHMARK(BM_Parse);

void BM_EvalDual(benchmark::State& state) {
  const Expr e = parse("x2/x1 + atan(x1*x2) - exp(-x1^2)", 2);
  const double p[] = {0.7, -0.3};
  for (auto _ : state) benchmark::DoNotOptimize(eval_dual(e, p));
}
BENCHMARK(BM_EvalDual);

void BM_Subdifferential(benchmark::State& state) {
  const CorpusEntry e = *find_corpus_entry(state.range(0) == 0 ? "fractional" : "ramp");
  const Point x = state.range(0) == 0 ? Point{1.0, 0.2} : Point{0.0};
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(subdifferential(e.function, e.region, x, 1e-6, 16, seed++));
}
BENCHMARK(BM_Subdifferential)->Arg(0)->Arg(1);

void BM_ClarkeDirectional(benchmark::State& state) {
  const double v[] = {0.6, 0.8};
  ClarkeScheme scheme;
  for (auto _ : state) {
    benchmark::DoNotOptimize(clarke_directional(fractional().function, fractional().region, Point{1.0, 0.2}, v, scheme));
    ++scheme.seed;
  }
}
BENCHMARK(BM_ClarkeDirectional);

void BM_BCurve(benchmark::State& state) {
  const PairSample s = make_pair_sample(fractional().function, Point{1.0, 0.0}, Point{2.0, 1.0});
  const Vector grid = lambda_grid(33);
  for (auto _ : state) {
    for (std::size_t k = 1; k + 1 < grid.size(); ++k) benchmark::DoNotOptimize(compute_b(fractional().function, s, grid[k]));
  }
}
BENCHMARK(BM_BCurve);

void BM_ClassifyEntry(benchmark::State& state) {
  const auto entries = corpus();
  const CorpusEntry& e = entries[static_cast<std::size_t>(state.range(0))];
  state.SetLabel(e.function.name());
  for (auto _ : state) benchmark::DoNotOptimize(classify(e.function, e.region, kAllProperties, SamplingPlan{}));
}
BENCHMARK(BM_ClassifyEntry)->DenseRange(0, 6)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
