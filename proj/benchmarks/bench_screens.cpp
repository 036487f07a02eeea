#include <benchmark/benchmark.h>

#include "oamqkd/phase_screen.hpp"
#include "oamqkd/rng.hpp"

namespace {

using namespace oamqkd;

void BM_PhaseScreen(benchmark::State& state) {
    const GridSpec grid(static_cast<std::size_t>(state.range(0)), 10.24 / state.range(0));
    const TurbulenceProfile profile(9.6e-14, 3.0, 5.0, 0.01);
    auto rng = make_engine(17);
    for (auto _ : state) {
        auto s = generate_phase_screen(0.1, grid, profile, rng);
        benchmark::DoNotOptimize(s.phases.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PhaseScreen)->Arg(256)->Arg(512)->Arg(1024)->Complexity();

void BM_PhaseScreenNoSubharmonics(benchmark::State& state) {
    const GridSpec grid(512, 0.02);
    const TurbulenceProfile profile(9.6e-14, 3.0, 5.0, 0.01);
    auto rng = make_engine(17);
    for (auto _ : state) {
        auto s = generate_phase_screen(0.1, grid, profile, rng, 0);
        benchmark::DoNotOptimize(s.phases.data());
    }
}
BENCHMARK(BM_PhaseScreenNoSubharmonics);

} // namespace
