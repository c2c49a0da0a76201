#include <benchmark/benchmark.h>

#include "cisar/design.hpp"
#include "cisar/signal.hpp"

using namespace cisar;

namespace {

FrequencyBand notch(double lo, double hi, double depth_db) {
    FrequencyBand b;
    b.f_lo = lo;
    b.f_hi = hi;
    b.depth_db = depth_db;
    b.energy_budget = budget_from_depth(depth_db, 1.0);
    return b;
}

void BM_ConstraintMatrix(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const FrequencyBand band = notch(0.19, 0.31, 40.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(constraint_matrix(band, n));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ConstraintMatrix)->RangeMultiplier(2)->Range(64, 512)->Complexity();

void BM_BlockSolve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const CVec reference = chirp_reference(4 * n, 1.0);
    const std::vector<ConstraintMatrix> cms = {constraint_matrix(notch(0.19, 0.31, 40.0), n),
                                               constraint_matrix(notch(0.765, 0.825, 30.0), n)};
    const std::vector<double> budgets = {budget_from_depth(40.0, 1.0) / 4.0,
                                         budget_from_depth(30.0, 1.0) / 4.0};
    const CVec segment = reference.head(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_block_first(segment, cms, budgets, 0.25, {}, nullptr));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BlockSolve)->RangeMultiplier(2)->Range(64, 512)->Complexity()->Unit(benchmark::kMillisecond);

void BM_DesignWaveform(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    DesignProblem problem;
    problem.reference = chirp_reference(n, 1.0);
    problem.bands = {notch(0.19, 0.31, 40.0), notch(0.765, 0.825, 30.0)};
    problem.block_size = n / 10;
    problem.overlap = n / 20;
    for (auto _ : state) {
        benchmark::DoNotOptimize(design_waveform(problem));
    }
}
BENCHMARK(BM_DesignWaveform)->Arg(1000)->Arg(2500)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
