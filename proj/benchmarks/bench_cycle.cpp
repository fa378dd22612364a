#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "spin_stirling/cycle.hpp"

using namespace spin_stirling;

namespace {

std::vector<CycleSpec> random_specs(std::size_t n) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> j(-200, 200), tc(5, 400), u(1.01, 10);
  std::vector<CycleSpec> v;
  while (v.size() < n) {
    const double ja = j(rng), jb = j(rng), c = tc(rng);
    if (ja == jb) continue;
    v.emplace_back(Coupling(ja), Coupling(jb), Temperature(c * u(rng)), Temperature(c));
  }
  return v;
}

void ledger(benchmark::State& state) {
  const auto specs = random_specs(1024);
  for (auto _ : state) {
    for (const auto& s : specs) benchmark::DoNotOptimize(assemble_ledger(s));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(specs.size()));
}

void work(benchmark::State& state) {
  const auto specs = random_specs(1024);
  for (auto _ : state) {
    for (const auto& s : specs) benchmark::DoNotOptimize(total_work(s));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(specs.size()));
}

}  // namespace

BENCHMARK(ledger)->Name("cycle/assemble_ledger");
BENCHMARK(work)->Name("cycle/total_work");
