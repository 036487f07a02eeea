#include <benchmark/benchmark.h>

#include <random>

#include "oamqkd/conjugation.hpp"
#include "oamqkd/mub.hpp"
#include "oamqkd/qkd.hpp"

namespace {

using namespace oamqkd;

std::vector<CrosstalkMatrix> random_ensemble(int d, int n) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<CrosstalkMatrix> out;
    for (int i = 0; i < n; ++i) {
        CrosstalkMatrix c;
        for (int k = 0; k < d; ++k) c.modes.push_back(k);
        c.c.resize(d, d);
        for (int r = 0; r < d; ++r)
            for (int col = 0; col < d; ++col) c.c(r, col) = cdouble(gauss(rng), gauss(rng));
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(c.c);
        c.c /= 1.1 * svd.singularValues()(0);
        out.push_back(std::move(c));
    }
    return out;
}

void BM_BuildMubs(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto m = build_mubs(d);
        benchmark::DoNotOptimize(m.bases.data());
    }
}
BENCHMARK(BM_BuildMubs)->Arg(2)->Arg(5)->Arg(8)->Arg(9);

void BM_ErrorRate(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const auto ensemble = random_ensemble(d, 300);
    std::vector<Eigen::VectorXcd> states;
    for (const auto& c : ensemble) states.push_back(postselect_state(c));
    const DensityMatrix rho = average_density_matrix(states);
    const MUBSet mubs = build_mubs(d);
    for (auto _ : state) benchmark::DoNotOptimize(average_error_rate(rho, mubs));
}
BENCHMARK(BM_ErrorRate)->Arg(2)->Arg(5)->Arg(9);

void BM_ConjugatedEnsemble(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const auto ensemble = random_ensemble(d, 300);
    for (auto _ : state) {
        auto rho = conjugated_ensemble(ensemble);
        benchmark::DoNotOptimize(rho.rho.data());
    }
}
BENCHMARK(BM_ConjugatedEnsemble)->Arg(2)->Arg(5)->Arg(9);

} // namespace
