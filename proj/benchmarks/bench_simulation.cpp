#include <benchmark/benchmark.h>

#include "franson/photon_sim.hpp"
#include "franson/pipeline.hpp"

using namespace franson;

namespace {

void BM_GeneratePairs(benchmark::State& state) {
    const double rate = static_cast<double>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        auto births = sim::generate_pairs(rate, 1'000'000'000'000, ++seed);
        benchmark::DoNotOptimize(births.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GeneratePairs)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void BM_SimulateDesk(benchmark::State& state) {
    auto cfg = ScenarioConfig::desk_defaults();
    cfg.duration_s = 1.0;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        auto run = simulate(cfg, 0.0, ++seed);
        benchmark::DoNotOptimize(run.signal.timestamps.data());
    }
}
BENCHMARK(BM_SimulateDesk)->Unit(benchmark::kMillisecond);

}  // namespace
