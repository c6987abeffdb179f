#include <benchmark/benchmark.h>

#include "detphase/circle.hpp"
#include "detphase/hodge.hpp"
#include "detphase/ode.hpp"

using namespace detphase;

namespace {

CircleDiracSpec wavy() {
  CircleDiracSpec spec;
  const double amps[] = {0.4};
  spec.phase = PhaseFunction::with_sines(1.0, 1, amps);
  spec.mass = spec.phase.max_abs_derivative() + 3.0;
  spec.nu = 1;
  return spec;
}

void BM_Monodromy(benchmark::State& state) {
  const MonodromySystem sys = monodromy_system(wavy());
  const int steps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(monodromy(sys, cplx(0.3, 1.1), steps));
}
BENCHMARK(BM_Monodromy)->Arg(1024)->Arg(4096);

void BM_CharValueTabulated(benchmark::State& state) {
  const MonodromyIntegrator integ(monodromy_system(wavy()), 4096);
  for (auto _ : state) benchmark::DoNotOptimize(integ.char_value(cplx(0.3, 1.1)));
}
BENCHMARK(BM_CharValueTabulated);

void BM_GalerkinSpectrum(benchmark::State& state) {
  const int cutoff = static_cast<int>(state.range(0));
  const CircleDiracSpec spec = wavy();
  for (auto _ : state) benchmark::DoNotOptimize(spectrum_galerkin(galerkin_matrix(spec, cutoff), cutoff));
}
BENCHMARK(BM_GalerkinSpectrum)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_CountRoots(benchmark::State& state) {
  const MonodromySystem sys = monodromy_system(wavy());
  ContourOptions options;
  options.steps = 1024;
  const SearchRegion region{-4.1, 4.3, -1.0, 1.2, 16.0};
  for (auto _ : state) benchmark::DoNotOptimize(count_roots(sys, region, options));
}
BENCHMARK(BM_CountRoots)->Unit(benchmark::kMillisecond);

void BM_HodgeTorus3(benchmark::State& state) {
  for (auto _ : state) {
    const TorusFourierComplex c = build_complex(3, 1);
    benchmark::DoNotOptimize(spectrum_dgamma(c));
  }
}
BENCHMARK(BM_HodgeTorus3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
