#include <benchmark/benchmark.h>

#include "risopt/channel.hpp"
#include "risopt/optimizers.hpp"
#include "risopt/separation.hpp"

namespace {

using namespace risopt;

SystemConfig bench_config(int n_y, int n_z, int k) {
  SystemConfig cfg;
  cfg.m_y = 4;
  cfg.m_z = 4;
  cfg.n_y = n_y;
  cfg.n_z = n_z;
  cfg.k = k;
  return cfg;
}

ChannelRealization bench_realization(const SystemConfig& cfg, std::uint64_t seed = 7) {
  RandomStream rng(seed);
  return generate_realization(cfg, rng);
}

void BM_GenerateRealization(benchmark::State& state) {
  const SystemConfig cfg = bench_config(8, 8, static_cast<int>(state.range(0)));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    RandomStream rng(seed++);
    benchmark::DoNotOptimize(generate_realization(cfg, rng));
  }
}
BENCHMARK(BM_GenerateRealization)->Arg(2)->Arg(5);

void BM_Separate(benchmark::State& state) {
  const SystemConfig cfg = bench_config(8, 8, static_cast<int>(state.range(0)));
  const ChannelRealization real = bench_realization(cfg);
  const double sigma2 = cfg.noise_power();
  for (auto _ : state) {
    benchmark::DoNotOptimize(separate(real, sigma2));
  }
}
BENCHMARK(BM_Separate)->Arg(2)->Arg(5);

// Per-candidate cost of a separated metric evaluation; this is the inner loop
// the whole separation machinery exists to make cheap.
void BM_SeparatedSumRateEval(benchmark::State& state) {
  const SystemConfig cfg = bench_config(8, 8, static_cast<int>(state.range(0)));
  const ChannelRealization real = bench_realization(cfg);
  const double sigma2 = cfg.noise_power();
  const SeparatedChannel sep = separate(real, sigma2);
  RandomStream rng(3);
  const PhaseVector phases = random_phases(cfg.n(), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(separated_metric(MetricKind::SumRate, sep, phases));
  }
}
BENCHMARK(BM_SeparatedSumRateEval)->Arg(2)->Arg(5);

// Same evaluation through the full M x K channel, for contrast.
void BM_DirectSumRateEval(benchmark::State& state) {
  const SystemConfig cfg = bench_config(8, 8, static_cast<int>(state.range(0)));
  const ChannelRealization real = bench_realization(cfg);
  const double sigma2 = cfg.noise_power();
  RandomStream rng(3);
  const PhaseVector phases = random_phases(cfg.n(), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sum_rate(global_channel(real, phases), sigma2));
  }
}
BENCHMARK(BM_DirectSumRateEval)->Arg(2)->Arg(5);

void BM_Muiq(benchmark::State& state) {
  const SystemConfig cfg = bench_config(8, 8, 2);
  const ChannelRealization real = bench_realization(cfg);
  const SeparatedChannel sep = separate(real, cfg.noise_power());
  const int bits = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(muiq(MetricKind::MmseRate, sep, bits, 1));
  }
}
BENCHMARK(BM_Muiq)->Arg(1)->Arg(3);

void BM_ClosedFormSumRate(benchmark::State& state) {
  const SystemConfig cfg = bench_config(8, 8, static_cast<int>(state.range(0)));
  const ChannelRealization real = bench_realization(cfg);
  const SeparatedChannel sep = separate(real, cfg.noise_power());
  for (auto _ : state) {
    benchmark::DoNotOptimize(closed_form_sum_rate(sep));
  }
}
BENCHMARK(BM_ClosedFormSumRate)->Arg(2)->Arg(5);

void BM_ClosedFormMseTot(benchmark::State& state) {
  const SystemConfig cfg = bench_config(8, 8, static_cast<int>(state.range(0)));
  const ChannelRealization real = bench_realization(cfg);
  const SeparatedChannel sep = separate(real, cfg.noise_power());
  for (auto _ : state) {
    benchmark::DoNotOptimize(closed_form_mse_tot(sep));
  }
}
BENCHMARK(BM_ClosedFormMseTot)->Arg(2)->Arg(5);

void BM_ProjectedAscentBaseline(benchmark::State& state) {
  const SystemConfig cfg = bench_config(8, 8, 2);
  const ChannelRealization real = bench_realization(cfg);
  const SeparatedChannel sep = separate(real, cfg.noise_power());
  std::uint64_t seed = 11;
  for (auto _ : state) {
    RandomStream rng(seed++);
    benchmark::DoNotOptimize(
        projected_ascent_baseline(MetricKind::SumRate, sep, static_cast<int>(state.range(0)), rng));
  }
}
BENCHMARK(BM_ProjectedAscentBaseline)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
