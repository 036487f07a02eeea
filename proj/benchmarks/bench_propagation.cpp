#include <benchmark/benchmark.h>

#include "oamqkd/lg.hpp"
#include "oamqkd/propagation.hpp"

namespace {

using namespace oamqkd;

void BM_LGSynthesis(benchmark::State& state) {
    const GridSpec grid(static_cast<std::size_t>(state.range(0)), 10.24 / state.range(0));
    const BeamParams beam(0.25, 1064e-9);
    for (auto _ : state) {
        auto f = lg_field(ModeIndex(3), 0.0, beam, grid);
        benchmark::DoNotOptimize(f.amplitudes.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LGSynthesis)->Arg(256)->Arg(512)->Arg(1024)->Complexity();

void BM_VacuumStep(benchmark::State& state) {
    const GridSpec grid(static_cast<std::size_t>(state.range(0)), 10.24 / state.range(0));
    const BeamParams beam(0.25, 1064e-9);
    const auto f = lg_field(ModeIndex(0), 0.0, beam, grid);
    for (auto _ : state) {
        auto g = vacuum_step(f, 5e5, beam);
        benchmark::DoNotOptimize(g.amplitudes.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_VacuumStep)->Arg(256)->Arg(512)->Arg(1024)->Complexity();

void BM_Overlap(benchmark::State& state) {
    const GridSpec grid(static_cast<std::size_t>(state.range(0)), 10.24 / state.range(0));
    const BeamParams beam(0.25, 1064e-9);
    const auto a = lg_field(ModeIndex(1), 0.0, beam, grid);
    const auto b = lg_field(ModeIndex(2), 0.0, beam, grid);
    for (auto _ : state) benchmark::DoNotOptimize(overlap(a, b));
}
BENCHMARK(BM_Overlap)->Arg(512)->Arg(1024);

} // namespace

BENCHMARK_MAIN();
