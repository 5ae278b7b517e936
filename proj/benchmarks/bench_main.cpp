#include <benchmark/benchmark.h>

#include "duosim/bargaining.hpp"
#include "duosim/market.hpp"
#include "duosim/trace.hpp"
#include "duosim/trainer.hpp"

using namespace duosim;

static void BM_EquilibriumOutcome(benchmark::State& state) {
    const Market m;
    double ql = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(m.equilibrium_outcome(QualityPair(ql, 0.8)));
        ql = ql < 0.7 ? ql + 1e-6 : 0.3;
    }
}
BENCHMARK(BM_EquilibriumOutcome);

static void BM_SolveNash(benchmark::State& state) {
    const DisagreementPoint d(QualityPair(0.2, 0.5));
    for (auto _ : state) benchmark::DoNotOptimize(solve_nash(d, 0.9));
}
BENCHMARK(BM_SolveNash);

static void BM_NashGridOracle(benchmark::State& state) {
    const DisagreementPoint d(QualityPair(0.2, 0.5));
    for (auto _ : state) benchmark::DoNotOptimize(nash_grid_oracle(d, 0.9, 1e-5));
}
BENCHMARK(BM_NashGridOracle)->Unit(benchmark::kMillisecond);

static void BM_TildeB(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(compute_tilde_b());
}
BENCHMARK(BM_TildeB)->Unit(benchmark::kMillisecond);

static void BM_DefectionFreeRun(benchmark::State& state) {
    RunConfig c;
    c.dim = static_cast<int>(state.range(0));
    c.rounds = 500;
    c.out = "unused.csv";
    for (auto _ : state) benchmark::DoNotOptimize(execute(c));
}
BENCHMARK(BM_DefectionFreeRun)->Arg(4)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
