#include <random>

#include <benchmark/benchmark.h>

#include "thermoqfi/bounds.hpp"
#include "thermoqfi/gibbs.hpp"
#include "thermoqfi/models.hpp"
#include "thermoqfi/qfi.hpp"

using namespace thermoqfi;

namespace {

Matrix random_hermitian(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix a(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) a(r, c) = Complex(gauss(rng), gauss(rng));
    }
    return Matrix(0.5 * (a + a.adjoint()));
}

ParamHamiltonian random_instance(int dim) {
    std::mt19937_64 rng(0xb5eedULL + static_cast<unsigned long long>(dim));
    return ParamHamiltonian(HermitianOperator(random_hermitian(rng, dim)),
                            {ParamTerm{"mu", 0.7, HermitianOperator(random_hermitian(rng, dim))}});
}

void BM_eigendecompose(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    const HermitianOperator H = random_instance(dim).total();
    for (auto _ : state) {
        benchmark::DoNotOptimize(eigendecompose(H));
    }
    state.SetComplexityN(dim);
}

void BM_thermal_state(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    const ParamHamiltonian H = random_instance(dim);
    for (auto _ : state) {
        benchmark::DoNotOptimize(thermal_state(H, 1.5));
    }
    state.SetComplexityN(dim);
}

void BM_qfi_matrix(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    const ParamHamiltonian H = random_instance(dim);
    const ThermalState rho = thermal_state(H, 1.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(qfi_matrix(rho, H));
    }
    state.SetComplexityN(dim);
}

void BM_miller_bound(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    const ParamHamiltonian H = random_instance(dim);
    const ThermalState rho = thermal_state(H, 1.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(miller_bound(rho, H.terms()[0].generator));
    }
    state.SetComplexityN(dim);
}

void BM_bound_report(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    const ParamHamiltonian H = random_instance(dim);
    const ThermalState rho = thermal_state(H, 1.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bound_report(rho, H, 1.0, 1e-2));
    }
    state.SetComplexityN(dim);
}

void BM_ghz_exact(benchmark::State& state) {
    GhzModel m;
    m.n = static_cast<int>(state.range(0));
    m.mu = 3.0;
    m.lambda = 6.0;
    m.beta = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ghz_exact(m));
    }
    state.SetComplexityN(m.n);
}

BENCHMARK(BM_eigendecompose)->RangeMultiplier(2)->Range(16, 256)->Complexity();
BENCHMARK(BM_thermal_state)->RangeMultiplier(2)->Range(16, 256)->Complexity();
BENCHMARK(BM_qfi_matrix)->RangeMultiplier(2)->Range(16, 256)->Complexity();
BENCHMARK(BM_miller_bound)->RangeMultiplier(2)->Range(16, 256)->Complexity();
BENCHMARK(BM_bound_report)->RangeMultiplier(2)->Range(16, 128)->Complexity();
BENCHMARK(BM_ghz_exact)->RangeMultiplier(2)->Range(8, 64)->Complexity();

} // namespace

BENCHMARK_MAIN();
