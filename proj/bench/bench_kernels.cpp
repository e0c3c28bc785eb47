// Serial reference against the OpenMP kernels on the sweeps that dominate run time.

#include <benchmark/benchmark.h>

#include "wmit/applied.hpp"
#include "wmit/inactivity.hpp"
#include "wmit/kernels.hpp"
#include "wmit/records.hpp"

namespace {

using wmit::kernels::Exec;

Exec mode(const benchmark::State& s) { return s.range(0) == 0 ? Exec::serial : Exec::parallel; }

void BM_WmitCurve(benchmark::State& state) {
    const auto d = wmit::make_parametric("weibull", {{"shape", 2.0}});
    const auto w = wmit::make_weight("power", std::nullopt, 2.0);
    const auto grid = wmit::quantile_grid(d, 512);
    for (auto _ : state) benchmark::DoNotOptimize(wmit::wmit_curve(d, w, grid, 1e-10, mode(state)));
    state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

void BM_RecordSampling(benchmark::State& state) {
    const auto d = wmit::make_parametric("exponential", {});
    for (auto _ : state) benchmark::DoNotOptimize(wmit::sample_records(d, 2, 1 << 16, 42, mode(state)));
    state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

void BM_RenewalSolve(benchmark::State& state) {
    const auto d = wmit::make_parametric("erlang", {{"k", 2.0}, {"rate", 2.0}});
    for (auto _ : state) benchmark::DoNotOptimize(wmit::solve_renewal(d, 0.0025, 10.0, mode(state)));
    state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

void BM_GridMap(benchmark::State& state) {
    const auto d = wmit::make_parametric("frechet", {{"c", 2.0}, {"gamma", 1.5}});
    const auto grid = wmit::quantile_grid(d, 4096);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            wmit::kernels::map(grid.points(), [&](double t) { return wmit::mit(d, t, 1e-10); }, mode(state)));
    }
    state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

}  // namespace

BENCHMARK(BM_WmitCurve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RecordSampling)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RenewalSolve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridMap)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
