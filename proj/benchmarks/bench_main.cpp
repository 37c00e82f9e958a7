#include <benchmark/benchmark.h>

#include "sire/dynamics.hpp"
#include "sire/eradication.hpp"
#include "sire/hjb.hpp"
#include "sire/value.hpp"

namespace {

const sire::ModelParams kParams{0.5, 2.0, 1.0};

void BM_Integrate(benchmark::State& state) {
    sire::ControlLaw c = sire::make_switching(0.3);
    for (auto _ : state) {
        auto tr = sire::integrate(kParams, c, {2.0, 3.0}, 1.0, {});
        benchmark::DoNotOptimize(tr.states.back());
    }
}
BENCHMARK(BM_Integrate);

void BM_EradicationTime(benchmark::State& state) {
    sire::ControlLaw c = sire::make_constant(0.0);
    for (auto _ : state) {
        double u = sire::eradication_time(kParams, c, 2.0, 3.0, {});
        benchmark::DoNotOptimize(u);
    }
}
BENCHMARK(BM_EradicationTime);

void BM_Gradient(benchmark::State& state) {
    sire::ControlLaw c = sire::make_switching(0.2);
    for (auto _ : state) {
        auto g = sire::gradient_eradication_time(kParams, c, 2.0, 3.0, {});
        benchmark::DoNotOptimize(g.du_dx);
    }
}
BENCHMARK(BM_Gradient);

void BM_ValueBySwitching(benchmark::State& state) {
    sire::SearchConfig sc;
    sc.n_grid = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto r = sire::value_by_switching(kParams, 2.0, 3.0, {}, sc);
        benchmark::DoNotOptimize(r.u);
    }
}
BENCHMARK(BM_ValueBySwitching)->Arg(64)->Arg(256);

void BM_HjbSolve(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    sire::GridSpec spec{0.01, 4.0, 1.0, 4.0, n, n};
    for (auto _ : state) {
        auto gv = sire::solve_hjb_semilagrangian(kParams, spec, {});
        benchmark::DoNotOptimize(gv.u.back());
    }
}
BENCHMARK(BM_HjbSolve)->Arg(51)->Arg(101)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
