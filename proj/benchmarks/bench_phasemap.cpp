#include <benchmark/benchmark.h>

#include "spin_stirling/phasemap.hpp"

using namespace spin_stirling;

namespace {

// Default 400 x 400 map; the argument is the thread count.
void default_sweep(benchmark::State& state) {
  const auto grid = SweepGrid::default_grid(Branch::BNegative);
  const SweepOptions opt{static_cast<unsigned>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(sweep(grid, opt));
  state.SetItemsProcessed(state.iterations() * 160000);
}

void export_csv(benchmark::State& state) {
  const auto cells = sweep(SweepGrid::default_grid(Branch::BNegative), {0});
  for (auto _ : state) benchmark::DoNotOptimize(export_cells(cells, ExportFormat::Csv));
}

}  // namespace

BENCHMARK(default_sweep)->Name("phasemap/sweep_400x400")->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(export_csv)->Name("phasemap/export_csv")->Unit(benchmark::kMillisecond);
