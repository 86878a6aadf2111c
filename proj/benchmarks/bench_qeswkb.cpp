#include <benchmark/benchmark.h>

#include <numbers>
#include <vector>

#include "qeswkb/eigensolver.hpp"
#include "qeswkb/fitmodels.hpp"
#include "qeswkb/qes_algebra.hpp"
#include "qeswkb/wkb.hpp"

using namespace qeswkb;

static void BM_SexticSpectrum(benchmark::State& state) {
  const PotentialSpec spec(SexticReduced{0.25});
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lowest_eigen(spec, k, 1e-12).energies.back());
}
BENCHMARK(BM_SexticSpectrum)->Arg(1)->Arg(11)->Arg(51)->Unit(benchmark::kMillisecond);

static void BM_MorseSpectrum(benchmark::State& state) {
  const PotentialSpec spec(Morse{1.0, 8.0, std::numbers::sqrt2, 0.0});
  for (auto _ : state) benchmark::DoNotOptimize(lowest_eigen(spec, 6, 1e-9).energies.back());
}
BENCHMARK(BM_MorseSpectrum)->Unit(benchmark::kMillisecond);

static void BM_Action(benchmark::State& state) {
  const PotentialSpec spec(SexticReduced{0.5});
  const double E = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(action(spec, E));
}
BENCHMARK(BM_Action)->Arg(1)->Arg(50)->Arg(400);

static void BM_BohrSommerfeld(benchmark::State& state) {
  const PotentialSpec spec(SexticReduced{0.0});
  for (auto _ : state) benchmark::DoNotOptimize(bohr_sommerfeld_invert(spec, 50, 0.0));
}
BENCHMARK(BM_BohrSommerfeld);

static void BM_FitEnergy(benchmark::State& state) {
  const Spectrum s = lowest_eigen(PotentialSpec(SexticReduced{0.0}), 51, 1e-12);
  std::vector<FitPoint> data;
  for (int n = 0; n <= 50; ++n) data.push_back({n, s.energies[n]});
  const EnergyFitParams init = published_energy_params(0.0, s.energies[0]);
  for (auto _ : state) benchmark::DoNotOptimize(fit_energy(data, s.energies[0], init).max_rel_error);
}
BENCHMARK(BM_FitEnergy)->Unit(benchmark::kMillisecond);

static void BM_QesStates(benchmark::State& state) {
  const PotentialSpec spec(SexticReduced{static_cast<double>(state.range(0))});
  for (auto _ : state) benchmark::DoNotOptimize(qes_states(spec).size());
}
BENCHMARK(BM_QesStates)->Arg(2)->Arg(8)->Arg(20);
BENCHMARK_MAIN();
