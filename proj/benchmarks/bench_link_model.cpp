#include <benchmark/benchmark.h>

#include "franson/link_model.hpp"
#include "franson/numerics.hpp"
#include "franson/sweeps.hpp"

using namespace franson;

namespace {

void BM_CaptureFraction(benchmark::State& state) {
    double tau = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(link::capture_fraction(tau, 30.0));
        tau = tau > 200.0 ? 1.0 : tau + 0.37;
    }
}
BENCHMARK(BM_CaptureFraction);

void BM_OptimizeWindow(benchmark::State& state) {
    const link::WindowPolicy policy;
    for (auto _ : state) {
        benchmark::DoNotOptimize(link::optimize_window(46.4, policy));
    }
}
BENCHMARK(BM_OptimizeWindow);

void BM_SyncSweep(benchmark::State& state) {
    const auto grid = math::linspace(0.0, 200.0, 201);
    const link::SyncSweepParams params;
    for (auto _ : state) {
        auto pts = link::sweep_visibility_vs_sync(grid, params);
        benchmark::DoNotOptimize(pts.data());
    }
}
BENCHMARK(BM_SyncSweep);

}  // namespace
