#include <benchmark/benchmark.h>

#include "blochlab/quasiadiabatic.hpp"

using namespace blochlab;

static void BM_RealizeHamiltonian(benchmark::State& state) {
    const int L = static_cast<int>(state.range(0));
    ModelSpec m = tv_ring(L, 1.0, 1.0, 1.0);
    auto basis = FockBasis::fixed_charge(L, L / 2);
    for (auto _ : state) benchmark::DoNotOptimize(m.realize(basis));
    state.SetComplexityN(basis->dim());
}
BENCHMARK(BM_RealizeHamiltonian)->Arg(8)->Arg(10)->Arg(12)->Complexity();

static void BM_DiagonalizeLowest(benchmark::State& state) {
    const int L = static_cast<int>(state.range(0));
    ModelSpec m = tv_ring(L, 1.0, 1.0, 1.0);
    auto H = m.realize(FockBasis::fixed_charge(L, L / 2));
    for (auto _ : state) benchmark::DoNotOptimize(diagonalize(H, DiagMode::lowest_k, 4));
}
BENCHMARK(BM_DiagonalizeLowest)->Arg(10)->Arg(12)->Arg(14)->Unit(benchmark::kMillisecond);

static void BM_DiagonalizeFull(benchmark::State& state) {
    const int L = static_cast<int>(state.range(0));
    ModelSpec m = dimerized_ring(L, 1.0, 0.1, 1.0);
    auto H = m.realize(FockBasis::fixed_charge(L, L / 2));
    for (auto _ : state) benchmark::DoNotOptimize(diagonalize(H));
}
BENCHMARK(BM_DiagonalizeFull)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_ApplyFilter(benchmark::State& state) {
    const int L = static_cast<int>(state.range(0));
    ModelSpec m = dimerized_ring(L, 1.0, 0.1, 1.0);
    auto basis = FockBasis::fixed_charge(L, L / 2);
    auto spec = diagonalize(m.realize(basis));
    auto cd = edge_currents(m, half_torus(m.lattice),
                            boundary_strip(m.lattice, StripSide::minus, 1),
                            boundary_strip(m.lattice, StripSide::plus, 1), basis);
    GroundSpace g = ground_projector(spec);
    FilterSpec filt(0.9 * g.gamma);
    for (auto _ : state) benchmark::DoNotOptimize(apply_filter(spec, cd.J_minus, filt));
}
BENCHMARK(BM_ApplyFilter)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
