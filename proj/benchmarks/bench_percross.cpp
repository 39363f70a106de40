#include <benchmark/benchmark.h>

#include "percross/conformal.hpp"
#include "percross/crossing.hpp"
#include "percross/elliptic.hpp"
#include "percross/percsim.hpp"
#include "percross/specfun.hpp"

#include <complex>

namespace {

using Complex = std::complex<double>;

const percross::elliptic::EquianharmonicContext& ctx() {
    static percross::elliptic::EquianharmonicContext c;
    return c;
}

void bm_hyper_3f2(benchmark::State& state) {
    const double z = state.range(0) / 100.0;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            percross::specfun::hyper_3f2(1, 1, 4.0 / 3.0, 2, 5.0 / 3.0, z));
}
BENCHMARK(bm_hyper_3f2)->Arg(50)->Arg(90)->Arg(99);

void bm_p_h(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(percross::crossing::p_h(0.37));
}
BENCHMARK(bm_p_h);

void bm_p_hv(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(percross::crossing::p_hv(0.37));
}
BENCHMARK(bm_p_hv);

void bm_n_h_fast(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(percross::crossing::n_h_fast(0.37));
}
BENCHMARK(bm_n_h_fast);

void bm_wp(benchmark::State& state) {
    const Complex w = 0.3 * ctx().W0() + 0.4 * ctx().W0_bar();
    for (auto _ : state) benchmark::DoNotOptimize(ctx().wp(w));
}
BENCHMARK(bm_wp);

void bm_schwarz_inverse(benchmark::State& state) {
    const Complex z(0.4, 0.8);
    for (auto _ : state)
        benchmark::DoNotOptimize(percross::conformal::schwarz_inverse(ctx(), z));
}
BENCHMARK(bm_schwarz_inverse);

void bm_trial_rectangle(benchmark::State& state) {
    using namespace percross::percsim;
    LatticeRun cfg;
    cfg.geometry = Geometry::rectangle;
    cfg.side_sites = static_cast<int>(state.range(0));
    const Lattice lat = Lattice::build(cfg);
    Workspace ws;
    long trial = 0;
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_trial(lat, cfg, trial++, ws));
    state.SetItemsProcessed(state.iterations() * lat.sites());
}
BENCHMARK(bm_trial_rectangle)->Arg(64)->Arg(128);

void bm_trial_surround(benchmark::State& state) {
    using namespace percross::percsim;
    LatticeRun cfg;
    cfg.geometry = Geometry::isosceles_schramm;
    cfg.side_sites = static_cast<int>(state.range(0));
    const Lattice lat = Lattice::build(cfg);
    Workspace ws;
    long trial = 0;
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_trial(lat, cfg, trial++, ws));
    state.SetItemsProcessed(state.iterations() * lat.sites());
}
BENCHMARK(bm_trial_surround)->Arg(64)->Arg(128);

} // namespace

BENCHMARK_MAIN();
