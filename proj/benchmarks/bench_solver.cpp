#include "ucp/avalanche.hpp"
#include "ucp/extraction.hpp"
#include "ucp/king_distribution.hpp"
#include "ucp/king_poisson.hpp"
#include "ucp/space_charge.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

const ucp::GaussianIonCloud kCloud(4e5, 250e-6);

void BM_GaussianField(benchmark::State& state) {
    double r = 0.0;
    for (auto _ : state) {
        r = r < 5e-3 ? r + 1e-6 : 0.0;
        benchmark::DoNotOptimize(ucp::gaussian_field(kCloud, r));
    }
}
BENCHMARK(BM_GaussianField);

void BM_ReducedDensity(benchmark::State& state) {
    double eta = 0.0;
    for (auto _ : state) {
        eta = eta < 20.0 ? eta + 1e-3 : 0.0;
        benchmark::DoNotOptimize(ucp::reduced_density(eta));
    }
}
BENCHMARK(BM_ReducedDensity);

void BM_SolveSelfconsistent(benchmark::State& state) {
    ucp::KingSolverOptions options;
    options.grid_points = static_cast<std::size_t>(state.range(0));
    options.max_refinements = 0;
    options.residual_tolerance = 1.0;
    for (auto _ : state) benchmark::DoNotOptimize(ucp::solve_selfconsistent(kCloud, 3.8e5, 10.0, options));
}
BENCHMARK(BM_SolveSelfconsistent)->Arg(500)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);

void BM_SimulateSweep(benchmark::State& state) {
    const auto solution = ucp::solve_selfconsistent(kCloud, 3.8e5, 10.0);
    const double eth = ucp::threshold_field(kCloud);
    std::vector<double> fields(61);
    for (std::size_t i = 0; i < fields.size(); ++i) fields[i] = 1.5 * eth * static_cast<double>(i) / 60.0;
    for (auto _ : state) benchmark::DoNotOptimize(ucp::simulate_sweep(solution, fields));
}
BENCHMARK(BM_SimulateSweep)->Unit(benchmark::kMillisecond);

void BM_Avalanche(benchmark::State& state) {
    const ucp::RydbergSample sample(30, 1e4);
    const ucp::AvalancheParameters params;
    for (auto _ : state) benchmark::DoNotOptimize(ucp::run_avalanche(sample, params, 10e-6));
}
BENCHMARK(BM_Avalanche);

}  // namespace
BENCHMARK_MAIN();
