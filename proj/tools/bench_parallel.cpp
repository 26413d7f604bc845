#include <benchmark/benchmark.h>

#include <random>

#include "geocake/dividen.hpp"
#include "geocake/gen.hpp"
#include "geocake/knives.hpp"
#include "geocake/svalue.hpp"

using namespace geocake;

namespace {

Exec mode(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

void BM_SValueRaster(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const Region cake = raster_pentagon(96);
  const GridDensity d = random_density(rng, cake, 16);
  for (auto _ : state) {
    benchmark::DoNotOptimize(s_value(d, cake, PieceFamily::fat_objects(2), 1.0 / 256, mode(state)));
  }
}

void BM_SValueBoxes(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const Region cake = Region::rectilinear({{0, 0, 1, 1}, {1, 0, 2, 0.5}, {0.25, 1, 0.75, 2}});
  const GridDensity d = random_density(rng, cake, 32);
  for (auto _ : state) benchmark::DoNotOptimize(s_value(d, cake, PieceFamily::squares(), 1.0 / 256, mode(state)));
}

void BM_SGoodCheck(benchmark::State& state) {
  const Region cake = Region::box({0, 0, 1, 1});
  const KnifeSpec spec{cake, TwinSquares{{0, 0, 1, 1}}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_s_good(spec, PieceFamily::squares(), 64, 1e-3, 1e-2, mode(state)));
  }
}

void BM_LabelGrid(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const Region cake = Region::box({0, 0, 1, 1});
  const auto tuple = build_square_tuple(cake, 3);
  const auto agents = random_agents(rng, cake, 3);
  for (auto _ : state) {
    auto grid = build_simplex_grid(3, 32);
    label_grid(grid, tuple, agents, 1.0 / 128, mode(state));
    benchmark::DoNotOptimize(grid.label.data());
  }
}

}  // namespace

BENCHMARK(BM_SValueRaster)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SValueBoxes)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SGoodCheck)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LabelGrid)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
