#include <benchmark/benchmark.h>

#include "seqihr/calibration.hpp"
#include "seqihr/integrator.hpp"
#include "seqihr/multirisk.hpp"
#include "seqihr/policy.hpp"

using namespace seqihr;

namespace {

ModelParams bench_params() {
    ModelParams p = default_params();
    p.beta = baseline_2020_beta();
    return p;
}

MRParams bench_mr() {
    MRParams mr;
    mr.epi = bench_params();
    mr.groups = default_groups();
    mr.seed_e0 = baseline_2020_e0();
    for (auto& g : mr.groups)
        g.death_scale = 0.02;
    return mr;
}

void BM_rhs(benchmark::State& state) {
    const ModelParams p = bench_params();
    CompartmentState x;
    x.s = 0.9;
    x.e = 0.01;
    x.i = 0.02;
    x.q = 0.01;
    x.h = 0.005;
    x.r = 0.05;
    for (auto _ : state)
        benchmark::DoNotOptimize(rhs(p, x));
}
BENCHMARK(BM_rhs);

void BM_simulate_year(benchmark::State& state) {
    const ModelParams p = bench_params();
    CompartmentState x0;
    x0.e = baseline_2020_e0();
    x0.s = 1.0 - x0.e;
    IntegrationConfig cfg;
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate(p, x0, cfg));
}
BENCHMARK(BM_simulate_year);

void BM_mr_simulate_year(benchmark::State& state) {
    const MRParams mr = bench_mr();
    const LockdownPolicy policy =
        LockdownPolicy::constant(LockdownPolicy::Kind::targeted, {0.3, 0.3, 0.8});
    IntegrationConfig cfg;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            simulate_mr(mr, policy, mr_initial_state(mr, mr.seed_e0), cfg));
}
BENCHMARK(BM_mr_simulate_year);

void BM_policy_evaluation(benchmark::State& state) {
    const MRParams mr = bench_mr();
    const LockdownPolicy policy =
        LockdownPolicy::constant(LockdownPolicy::Kind::uniform, {0.5, 0.5, 0.5});
    for (auto _ : state)
        benchmark::DoNotOptimize(evaluate_policy(mr, policy));
}
BENCHMARK(BM_policy_evaluation);

void BM_uniform_sweep(benchmark::State& state) {
    const MRParams mr = bench_mr();
    PolicyGrid grid;
    grid.kind = LockdownPolicy::Kind::uniform;
    grid.step = 0.05;
    for (auto _ : state)
        benchmark::DoNotOptimize(frontier_sweep(mr, grid, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_uniform_sweep)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
