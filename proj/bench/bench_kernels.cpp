#include <benchmark/benchmark.h>

#include "dtcoin/parallel.hpp"

namespace {

using namespace dtcoin;

Scenario grid_scenario() {
  ScenarioParams p;
  p.subsystems = 2;
  p.coin_nodes = 2;
  auto s = make_scenario(p, 0);
  s.initial_requests = {1, 2};
  return s;
}

Scenario epg_scenario() {
  ScenarioParams p;
  p.subsystems = 4;
  p.coin_nodes = 3;
  auto s = make_scenario(p, 1);
  s.initial_requests = {1, 2, 3, 1};
  return s;
}

void BM_GridBest(benchmark::State& st) {
  const auto s = grid_scenario();
  for (auto _ : st) benchmark::DoNotOptimize(parallel::grid_best(s, s.initial_requests));
}
BENCHMARK(BM_GridBest)->Unit(benchmark::kMillisecond);

void BM_GridBestSerial(benchmark::State& st) {
  const auto s = grid_scenario();
  for (auto _ : st) benchmark::DoNotOptimize(parallel::grid_best_serial(s, s.initial_requests));
}
BENCHMARK(BM_GridBestSerial)->Unit(benchmark::kMillisecond);

void BM_VerifyEpg(benchmark::State& st) {
  const auto s = epg_scenario();
  const auto ctx = game::default_context(s, s.initial_requests);
  const auto table = game::build_table(ctx);
  for (auto _ : st) benchmark::DoNotOptimize(parallel::verify_epg(ctx, table));
}
BENCHMARK(BM_VerifyEpg)->Unit(benchmark::kMillisecond);

void BM_VerifyEpgSerial(benchmark::State& st) {
  const auto s = epg_scenario();
  const auto ctx = game::default_context(s, s.initial_requests);
  const auto table = game::build_table(ctx);
  for (auto _ : st) benchmark::DoNotOptimize(game::verify_epg(ctx, table));
}
BENCHMARK(BM_VerifyEpgSerial)->Unit(benchmark::kMillisecond);

parallel::CellSpec small_cell() {
  parallel::CellSpec c;
  c.scenario.subsystems = 4;
  c.scenario.coin_nodes = 3;
  c.train.episodes = 4;
  c.train.steps_per_episode = 10;
  c.train.validation_every = 2;
  c.train.validation_episodes = 1;
  c.eval_slots = 10;
  return c;
}

void BM_SweepSeeds(benchmark::State& st) {
  const auto cell = small_cell();
  const std::vector<std::uint64_t> seeds = {0, 1, 2, 3};
  for (auto _ : st) benchmark::DoNotOptimize(parallel::sweep_seeds(cell, seeds));
}
BENCHMARK(BM_SweepSeeds)->Unit(benchmark::kMillisecond);

void BM_SweepSeedsSerial(benchmark::State& st) {
  const auto cell = small_cell();
  const std::vector<std::uint64_t> seeds = {0, 1, 2, 3};
  for (auto _ : st) benchmark::DoNotOptimize(parallel::sweep_seeds_serial(cell, seeds));
}
BENCHMARK(BM_SweepSeedsSerial)->Unit(benchmark::kMillisecond);

void BM_MlpForward(benchmark::State& st) {
  Rng rng(3);
  const orra::Mlp net({42, 64, 64, 6 * orra::kGridActions}, rng);
  std::vector<double> x(42, 0.0);
  for (int m = 0; m < 6; ++m) x[m * 7 + 1 + m % 3] = 1.0;
  orra::Mlp::Cache cache;
  for (auto _ : st) benchmark::DoNotOptimize(net.forward(x, cache));
}
BENCHMARK(BM_MlpForward)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
