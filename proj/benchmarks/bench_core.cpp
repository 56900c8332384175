#include <benchmark/benchmark.h>

#include <cmath>
#include <string>
#include <vector>

#include "catspec/constants.hpp"
#include "catspec/fitting.hpp"
#include "catspec/fock_oracle.hpp"
#include "catspec/lineprofile.hpp"
#include "catspec/montecarlo.hpp"
#include "catspec/sequence.hpp"
#include "catspec/signal.hpp"
#include "catspec/statistics.hpp"

using namespace catspec;

static void BM_AnalyticExpectation(benchmark::State& state) {
    const ProtocolParams p = ProtocolParams::demonstration();
    double phi = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(expectation(p, phi, true));
        phi += 1e-3;
    }
}
BENCHMARK(BM_AnalyticExpectation);

static void BM_OracleBuild(benchmark::State& state) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(fock::ProtocolOracle(2.88, dim));
}
BENCHMARK(BM_OracleBuild)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_OracleRun(benchmark::State& state) {
    const fock::ProtocolOracle oracle(2.88, 128);
    double phi = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(oracle.run(0.071, 0.155, phi, 0.3));
        phi += 0.01;
    }
}
BENCHMARK(BM_OracleRun)->Unit(benchmark::kMicrosecond);

static void BM_HeatingWalk(benchmark::State& state) {
    const WalkProfile profile{WalkShape::Trapezoid, 50e-6, 32e-6, 8.3, static_cast<std::size_t>(state.range(0))};
    RngStream rng(1, 0);
    for (auto _ : state) benchmark::DoNotOptimize(heating_walk(profile, 40.0, rng));
}
BENCHMARK(BM_HeatingWalk)->Arg(100)->Arg(1000);

static void BM_SimulateProtocol(benchmark::State& state) {
    const ProtocolParams p = ProtocolParams::demonstration();
    const RngStream rng(1, 1);
    for (auto _ : state) benchmark::DoNotOptimize(simulate_protocol(p, 1.0, 4200, 1.0, rng, 1));
}
BENCHMARK(BM_SimulateProtocol)->Unit(benchmark::kMillisecond);

static void BM_CompareMethodsAnalytic(benchmark::State& state) {
    const MethodsConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(compare_methods_analytic(cfg));
}
BENCHMARK(BM_CompareMethodsAnalytic)->Unit(benchmark::kMillisecond);

static void BM_SinusoidFit(benchmark::State& state) {
    WeightedSeries d;
    for (int i = 0; i < 41; ++i) {
        const double x = -constants::pi / 2.0 + constants::two_pi * i / 40.0;
        d.x.push_back(x);
        d.y.push_back(0.33 * std::sin(x + 0.2));
        d.sigma.push_back(0.01);
    }
    for (auto _ : state) benchmark::DoNotOptimize(fit_sinusoid(d, 1.1 * constants::two_pi));
}
BENCHMARK(BM_SinusoidFit);

static void BM_SpectrumScan(benchmark::State& state) {
    const SpectralModel model;
    const ProtocolParams params = ProtocolParams::demonstration();
    const DriveParams drive{1.0, 10e-6, calibrate_saturation(model, 1.0, 10e-6, 0.75)};
    std::vector<double> grid;
    for (int i = 0; i < 41; ++i) grid.push_back(-80e6 + 4e6 * i);
    for (auto _ : state)
        benchmark::DoNotOptimize(spectrum_scan(model, drive, params, grid, SpectrumSampling{2000, RngStream(1, 2)}));
}
BENCHMARK(BM_SpectrumScan)->Unit(benchmark::kMillisecond);

static void BM_ParseAndValidate(benchmark::State& state) {
    const SequenceProgram program = load_sequence(std::string(CATSPEC_SEQUENCE_DIR) + "/phase_sensitive_sigma_y.seq");
    const std::string text = render_sequence(program);
    for (auto _ : state) {
        const auto p = parse_sequence(text);
        benchmark::DoNotOptimize(validate_sequence(p));
    }
}
BENCHMARK(BM_ParseAndValidate);
BENCHMARK_MAIN();
