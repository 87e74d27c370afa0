#include <benchmark/benchmark.h>

#include <random>

#include "franson/coincidence.hpp"
#include "franson/photon_sim.hpp"

using namespace franson;

namespace {

TimestampStream poisson_stream(double rate_cps, std::int64_t duration_ps, std::uint64_t seed) {
    TimestampStream s;
    s.duration_ps = duration_ps;
    s.timestamps = sim::generate_pairs(rate_cps, duration_ps, seed);
    return s;
}

void BM_CrossCorrelate(benchmark::State& state) {
    const double rate = static_cast<double>(state.range(0));
    const std::int64_t duration = 1'000'000'000'000;  // 1 s
    const auto a = poisson_stream(rate, duration, 1);
    const auto b = poisson_stream(rate, duration, 2);
    for (auto _ : state) {
        auto d = coinc::cross_correlate(a, b, 2000);
        benchmark::DoNotOptimize(d.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.size() + b.size()));
}
BENCHMARK(BM_CrossCorrelate)->Arg(10'000)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void BM_Histogram(benchmark::State& state) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::int64_t> u(-2000, 2000);
    std::vector<std::int64_t> diffs(static_cast<std::size_t>(state.range(0)));
    for (auto& d : diffs) {
        d = u(rng);
    }
    for (auto _ : state) {
        auto h = coinc::build_histogram(diffs, 1.0, -2000, 2000);
        benchmark::DoNotOptimize(h.counts.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Histogram)->Arg(1'000'000);

}  // namespace
