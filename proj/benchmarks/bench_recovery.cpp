#include <benchmark/benchmark.h>

#include "cisar/recovery.hpp"

using namespace cisar;

namespace {

struct Instance {
    UndercompleteOperator ox;
    UndercompleteOperator oy;
    CMat data;
};

Instance make_instance(int rows, int cols) {
    std::vector<int> missing;
    for (int i = cols / 5; i < cols / 5 + cols / 4; ++i) missing.push_back(i);
    Instance inst{undercomplete_operator(rows, {}), undercomplete_operator(cols, missing), {}};
    CMat truth = CMat::Zero(rows, cols);
    for (int k = 0; k < 6; ++k) truth(k * rows / 7, k * cols / 7) = Complex(1.0, -0.5);
    inst.data = inst.ox.matrix * truth * inst.oy.matrix.adjoint();
    return inst;
}

void BM_Sl0Recover(benchmark::State& state) {
    const Instance inst = make_instance(static_cast<int>(state.range(0)),
                                        static_cast<int>(state.range(1)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(sl0_recover(inst.data, inst.ox, inst.oy, {}));
    }
}
BENCHMARK(BM_Sl0Recover)->Args({32, 64})->Args({64, 128})->Args({150, 445})
    ->Unit(benchmark::kMillisecond);

void BM_RmRecover(benchmark::State& state) {
    const Instance inst = make_instance(static_cast<int>(state.range(0)),
                                        static_cast<int>(state.range(1)));
    const CMat initial = inst.ox.pinv * inst.data * inst.oy.pinv.adjoint();
    RmParams params;
    params.lambda = 0.01;
    params.tau = 20.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(rm_recover(inst.data, inst.ox, inst.oy, params, initial));
    }
}
BENCHMARK(BM_RmRecover)->Args({32, 64})->Args({64, 128})->Args({150, 445})
    ->Unit(benchmark::kMillisecond);

}  // namespace
