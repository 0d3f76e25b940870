#include "rose/inference.hpp"
#include "rose/simgen.hpp"

#include <benchmark/benchmark.h>

namespace {

const rose::Dataset& contaminated_data() {
  static const rose::Dataset d =
      rose::generate_dataset(rose::contaminated_design(300, 500, 5.0), rose::SeedSpec{4, 0});
  return d;
}

void BM_InitialEstimator(benchmark::State& state) {
  const rose::MethodConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(rose::initial_estimator(contaminated_data(), cfg).beta.data());
}
BENCHMARK(BM_InitialEstimator)->Unit(benchmark::kMillisecond);

void BM_PrepareFit(benchmark::State& state) {
  const rose::MethodConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(rose::prepare_fit(contaminated_data(), cfg).s_n);
}
BENCHMARK(BM_PrepareFit)->Unit(benchmark::kMillisecond);

// One target given a prepared context: the recursive score and Newton steps.
void BM_RoseFitTarget(benchmark::State& state) {
  const rose::FitContext ctx = rose::prepare_fit(contaminated_data(), rose::MethodConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(rose::rose_fit(ctx, 0, 0.05).beta_hat);
}
BENCHMARK(BM_RoseFitTarget)->Unit(benchmark::kMillisecond);

}  // namespace
