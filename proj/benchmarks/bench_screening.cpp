#include "rose/screening.hpp"
#include "rose/simgen.hpp"

#include <benchmark/benchmark.h>

namespace {

rose::Dataset screening_data(int n, int p) {
  return rose::generate_dataset(rose::contaminated_design(n, p, 5.0), rose::SeedSpec{1, 0});
}

void BM_SirsStats(benchmark::State& state) {
  const auto d = screening_data(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(rose::sirs_stats(d));
}
BENCHMARK(BM_SirsStats)->Args({100, 500})->Args({300, 500})->Args({500, 1000})->Unit(benchmark::kMillisecond);

void BM_SisStats(benchmark::State& state) {
  const auto d = screening_data(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(rose::sis_stats(d));
}
BENCHMARK(BM_SisStats)->Args({300, 500})->Args({500, 1000})->Unit(benchmark::kMillisecond);

// Statistics for every refresh point of the recursive schedule.
void BM_ScreeningSchedule(benchmark::State& state) {
  const auto d = screening_data(static_cast<int>(state.range(0)), 500);
  const int s_n = rose::default_split(d.n());
  rose::ScreenerConfig cfg;
  cfg.refresh_every = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(rose::screening_statistics(d, s_n, cfg));
}
BENCHMARK(BM_ScreeningSchedule)->Args({300, 1})->Args({300, 10})->Unit(benchmark::kMillisecond);

}  // namespace
