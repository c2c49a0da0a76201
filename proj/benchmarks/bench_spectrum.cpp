#include <benchmark/benchmark.h>

#include "cisar/signal.hpp"
#include "cisar/spectrum.hpp"

using namespace cisar;

namespace {

void BM_WelchPsd(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const CVec c = chirp_reference(n, 1.0);
    const WelchParams params = default_welch_params(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(welch_psd(c, params));
    }
}
BENCHMARK(BM_WelchPsd)->Arg(5000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Autocorrelation(benchmark::State& state) {
    const CVec c = chirp_reference(static_cast<int>(state.range(0)), 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(autocorrelation(c, 8));
    }
}
BENCHMARK(BM_Autocorrelation)->Arg(5000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_BandEnergy(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const CVec c = chirp_reference(n, 1.0);
    FrequencyBand band;
    band.f_lo = 0.19;
    band.f_hi = 0.31;
    band.energy_budget = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(band_energy(c, band));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BandEnergy)->RangeMultiplier(2)->Range(512, 8192)->Complexity();

}  // namespace
