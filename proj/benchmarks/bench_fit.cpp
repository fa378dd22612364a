#include <benchmark/benchmark.h>

#include <random>

#include "spin_stirling/bleaney_bowers_fit.hpp"
#include "spin_stirling/dimer.hpp"

using namespace spin_stirling;

namespace {

SusceptibilityDataset noisy(std::uint64_t seed) {
  SusceptibilityDataset d;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 0.01);
  for (double t = 20.0; t <= 350.0; t += 10.0) {
    const double chi = molar_susceptibility({Coupling(-42.0), Temperature(t)}, 2.1);
    d.points.push_back({t, chi * (1.0 + gauss(rng))});
  }
  return d;
}

void fit_fixed_g(benchmark::State& state) {
  const auto d = noisy(1);
  for (auto _ : state) benchmark::DoNotOptimize(fit_bleaney_bowers(d));
}

void fit_free_g(benchmark::State& state) {
  const auto d = noisy(1);
  for (auto _ : state) benchmark::DoNotOptimize(fit_bleaney_bowers(d, FreeG{}));
}

}  // namespace

BENCHMARK(fit_fixed_g)->Name("fit/fixed_g")->Unit(benchmark::kMicrosecond);
BENCHMARK(fit_free_g)->Name("fit/free_g")->Unit(benchmark::kMicrosecond);
