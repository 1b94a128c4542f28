#include <multifrac/generators.hpp>
#include <multifrac/numeric.hpp>
#include <multifrac/scaling.hpp>
#include <multifrac/spectrum.hpp>
#include <multifrac/volumetrics.hpp>

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

using namespace multifrac;

namespace {

IncrementEnsemble lognormal_atoms(std::size_t count) {
    std::mt19937_64 rng(1);
    std::lognormal_distribution<double> d(0.0, 0.5);
    std::vector<double> mags(count);
    for (auto& m : mags) m = d(rng);
    return IncrementEnsemble::uniform(1.0 / 64, std::move(mags));
}

void BM_Moments(benchmark::State& state) {
    const auto ens = lognormal_atoms(static_cast<std::size_t>(state.range(0)));
    const auto grid = arange(-3.0, 6.0, 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(moments(ens, grid));
    state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_Moments)->Arg(1 << 12)->Arg(1 << 16);

void BM_VolumetricReport(benchmark::State& state) {
    const auto tab = moments(lognormal_atoms(1 << 14), arange(-3.0, 6.0, 0.1));
    for (auto _ : state) benchmark::DoNotOptimize(volumetric_report(tab));
}
BENCHMARK(BM_VolumetricReport);

void BM_Increments3D(benchmark::State& state) {
    MonoFractalSpec spec;
    spec.n = static_cast<std::size_t>(state.range(0));
    spec.ell = 1.0 / 16;
    const auto field = gen_monofractal(spec);
    const auto dirs = default_directions(3);
    for (auto _ : state) benchmark::DoNotOptimize(increments(field, spec.ell, dirs));
}
BENCHMARK(BM_Increments3D)->Arg(32)->Arg(64);

void BM_RademacherMember(benchmark::State& state) {
    RademacherSpec spec;
    spec.n = static_cast<std::size_t>(state.range(0));
    spec.modes = band_limited_modes(3, 3, 1.0, 8.0, -11.0 / 6.0, 3);
    std::size_t m = 0;
    for (auto _ : state) benchmark::DoNotOptimize(gen_rademacher_member(spec, m++));
}
BENCHMARK(BM_RademacherMember)->Arg(32)->Arg(64);

void BM_SpectrumFromCorrelation(benchmark::State& state) {
    auto ell = logspace(1e-6, 6.0, 3000);
    ell.insert(ell.begin(), 0.0);
    std::vector<double> gamma;
    for (double x : ell) gamma.push_back((1.0 - 0.5 * std::pow(x, 2.0 / 3.0)) * std::exp(-x * x));
    const auto corr = correlation_from_gamma(ell, gamma, 1.0);
    const auto kappa = logspace(1.0, 1000.0, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(spectrum_from_correlation(corr, kappa));
}
BENCHMARK(BM_SpectrumFromCorrelation)->Arg(40)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
