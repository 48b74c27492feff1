#include <benchmark/benchmark.h>

#include <vector>

#include "dcesim/bogoliubov.hpp"
#include "dcesim/evolution.hpp"

namespace {

dcesim::SimulationConfig resonant(int K, double t_max) {
    dcesim::SimulationConfig cfg;
    cfg.mass = 0.7;
    cfg.omega = 2.0 * dcesim::omega_static(1, cfg);
    cfg.cutoff = K;
    cfg.t_max = t_max;
    cfg.sample_dt = t_max;
    return cfg;
}

void BM_ApplyW(benchmark::State& state) {
    const auto cfg = resonant(static_cast<int>(state.range(0)), 1.0);
    const dcesim::ModeModel model(cfg);
    const auto size = static_cast<std::size_t>(4 * cfg.cutoff);
    std::vector<double> x(size, 0.1), d(size);
    double t = 0.0;
    for (auto _ : state) {
        dcesim::apply_w(model, t, x, d);
        benchmark::DoNotOptimize(d.data());
        t += 1e-3;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ApplyW)->Arg(10)->Arg(20)->Arg(30)->Arg(50);

void BM_EvolveColumn(benchmark::State& state) {
    const auto cfg = resonant(static_cast<int>(state.range(0)), 50.0);
    const dcesim::ModeModel model(cfg);
    for (auto _ : state) {
        const auto stats = dcesim::evolve_column(model, 1, [](const dcesim::EvolutionState&, std::size_t) {});
        benchmark::DoNotOptimize(stats.accepted);
    }
}
BENCHMARK(BM_EvolveColumn)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_ComputeSpectrum(benchmark::State& state) {
    const auto cfg = resonant(10, 20.0);
    for (auto _ : state) benchmark::DoNotOptimize(dcesim::compute_spectrum(cfg, 1).spectrum.N.size());
}
BENCHMARK(BM_ComputeSpectrum)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
