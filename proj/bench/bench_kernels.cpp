#include <benchmark/benchmark.h>

#include "curvlab/surfaces.hpp"
#include "curvlab/verify.hpp"

using namespace curvlab;

namespace {

SurfaceSpec torus_spec(int n, bool engine)
{
    SurfaceSpec s;
    s.family = Torus3Spec{2.0, 0.5};
    s.resolution = {n};
    s.force_engine = engine;
    return s;
}

void build(benchmark::State& state, Execution exec, bool engine)
{
    const auto space = WarpedSpace::euclidean(3);
    const auto spec = torus_spec(static_cast<int>(state.range(0)), engine);
    for (auto _ : state) benchmark::DoNotOptimize(build_surface(spec, space, exec));
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void weighted(benchmark::State& state, Execution exec)
{
    const auto space = WarpedSpace::euclidean(3);
    const auto cloud = build_surface(torus_spec(static_cast<int>(state.range(0)), false), space);
    const auto phi = RadialFunction::power(1.0, 2);
    for (auto _ : state) benchmark::DoNotOptimize(weighted_hm_residual(cloud, space, 2, phi, exec));
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(cloud.size()));
}

void BM_EngineSerial(benchmark::State& s) { build(s, Execution::Serial, true); }
void BM_EngineParallel(benchmark::State& s) { build(s, Execution::Parallel, true); }
void BM_ClosedFormSerial(benchmark::State& s) { build(s, Execution::Serial, false); }
void BM_ClosedFormParallel(benchmark::State& s) { build(s, Execution::Parallel, false); }
void BM_WeightedHmSerial(benchmark::State& s) { weighted(s, Execution::Serial); }
void BM_WeightedHmParallel(benchmark::State& s) { weighted(s, Execution::Parallel); }

} // namespace

BENCHMARK(BM_EngineSerial)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EngineParallel)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ClosedFormSerial)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ClosedFormParallel)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_WeightedHmSerial)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_WeightedHmParallel)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
