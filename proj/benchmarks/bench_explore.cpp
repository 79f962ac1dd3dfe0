#include <benchmark/benchmark.h>

#include "roix/analysis.hpp"
#include "roix/dfs_explorer.hpp"
#include "roix/geometry.hpp"
#include "roix/grid_world.hpp"

namespace {

void BM_GenerateRoi(benchmark::State& state) {
  const int cells = static_cast<int>(state.range(0));
  uint64_t seed = 1;
  for (auto _ : state) {
    auto roi = roix::generate_random_roi(cells, seed++);
    benchmark::DoNotOptimize(roi);
  }
}
BENCHMARK(BM_GenerateRoi)->Arg(40)->Arg(120)->Arg(200);

void BM_Explore(benchmark::State& state) {
  const int cells = static_cast<int>(state.range(0));
  const auto world = roix::generate_random_roi(cells, 7);
  for (auto _ : state) {
    auto run = roix::explore(world, {1, 1.0, 0.0});
    benchmark::DoNotOptimize(run.total_time);
  }
}
BENCHMARK(BM_Explore)->Arg(40)->Arg(120)->Arg(200);

void BM_ExploreTeam(benchmark::State& state) {
  const int robots = static_cast<int>(state.range(0));
  const auto world = roix::generate_random_roi(120, 7);
  for (auto _ : state) {
    auto run = roix::explore(world, {robots, 2.5, 1.0});
    benchmark::DoNotOptimize(run.total_time);
  }
}
BENCHMARK(BM_ExploreTeam)->Arg(1)->Arg(4)->Arg(20)->Arg(32);

void BM_RewardAudit(benchmark::State& state) {
  const auto world = roix::generate_random_roi(120, 7);
  const auto run = roix::explore(world, {20, 2.5, 1.0});
  for (auto _ : state) {
    auto audit = roix::audit_rewards(run);
    benchmark::DoNotOptimize(audit.total);
  }
}
BENCHMARK(BM_RewardAudit);

void BM_BruteForceOpt(benchmark::State& state) {
  const auto world = roix::generate_random_roi(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) {
    double opt = roix::brute_force_opt(world, 2, 1.5, 0.5);
    benchmark::DoNotOptimize(opt);
  }
}
BENCHMARK(BM_BruteForceOpt)->Arg(6)->Arg(8);

void BM_Rasterize(benchmark::State& state) {
  const auto poly = roix::random_fat_shape(5);
  for (auto _ : state) {
    auto ga = roix::rasterize(poly, {0.25, 0.5});
    benchmark::DoNotOptimize(ga.outer_cells.size());
  }
}
BENCHMARK(BM_Rasterize);

void BM_BestInnerGrid(benchmark::State& state) {
  const auto poly = roix::random_fat_shape(5);
  for (auto _ : state) {
    auto [ga, count] = roix::best_inner_grid(poly, 0.1);
    benchmark::DoNotOptimize(count);
  }
}
BENCHMARK(BM_BestInnerGrid);

}  // namespace

BENCHMARK_MAIN();
