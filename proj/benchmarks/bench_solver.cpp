#include "rose/simgen.hpp"
#include "rose/solver.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

void BM_CompositeGd(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int p = static_cast<int>(state.range(1));
  const auto d = rose::generate_dataset(rose::contaminated_design(n, p, 5.0), rose::SeedSpec{2, 0});
  const rose::LossSpec spec = state.range(2) ? rose::LossSpec::tukey() : rose::LossSpec::squared();
  rose::SolverConfig cfg;
  cfg.lambda = 0.5 * std::sqrt(std::log(p) / n);
  int iterations = 0;
  for (auto _ : state) {
    const auto r = rose::composite_gd(d, spec, cfg, rose::CoefVector::Zero(p));
    iterations = r.iterations;
    benchmark::DoNotOptimize(r.beta.data());
  }
  state.counters["iterations"] = iterations;
}
BENCHMARK(BM_CompositeGd)
    ->Args({200, 400, 1})
    ->Args({300, 500, 1})
    ->Args({300, 500, 0})
    ->Unit(benchmark::kMillisecond);

void BM_StationarityGap(benchmark::State& state) {
  const auto d = rose::generate_dataset(rose::contaminated_design(300, 500, 5.0), rose::SeedSpec{3, 0});
  const rose::CoefVector b = d.x.row(0).transpose() * 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rose::stationarity_gap(d, b, rose::LossSpec::tukey(), 0.1));
  }
}
BENCHMARK(BM_StationarityGap)->Unit(benchmark::kMicrosecond);

}  // namespace
