#include <benchmark/benchmark.h>

#include "spin_stirling/dimer.hpp"
#include "spin_stirling/gibbs_oracle.hpp"

using namespace spin_stirling;

namespace {

// 64 points spread over both signs of J and two decades of T.
std::vector<ThermalPoint> points() {
  std::vector<ThermalPoint> v;
  for (int i = 0; i < 64; ++i) {
    v.push_back({Coupling(-200.0 + 400.0 * i / 63.0), Temperature(5.0 + 6.0 * i)});
  }
  return v;
}

template <double (*F)(const ThermalPoint&) noexcept>
void state_function(benchmark::State& state) {
  const auto pts = points();
  for (auto _ : state) {
    for (const auto& p : pts) benchmark::DoNotOptimize(F(p));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size()));
}

void gibbs(benchmark::State& state) {
  const auto pts = points();
  for (auto _ : state) {
    for (const auto& p : pts) benchmark::DoNotOptimize(gibbs_oracle(p));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size()));
}

}  // namespace

BENCHMARK(state_function<dimensionless_susceptibility>)->Name("dimer/F");
BENCHMARK(state_function<entropy>)->Name("dimer/S");
BENCHMARK(state_function<internal_energy>)->Name("dimer/U");
BENCHMARK(state_function<log_partition_excess>)->Name("dimer/lnZ_excess");
BENCHMARK(gibbs)->Name("dimer/gibbs_oracle");
