#include <benchmark/benchmark.h>

#include <cmath>

#include "iscat/forward.hpp"
#include "iscat/jacobian.hpp"
#include "iscat/newton.hpp"

namespace {

using namespace iscat;

const Vec2 kTheta{-0.5, std::sqrt(3.0) / 2.0};

void BM_ForwardSolve(benchmark::State& state) {
    const int n_quad = static_cast<int>(state.range(0));
    const auto flower = TrigShape::flower(2.0, 0.3, 4);
    const auto dirs = uniform_directions(16);
    const IncidentWave wave(8.0, kTheta);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_scattering(flower, wave, dirs, n_quad));
    }
}
BENCHMARK(BM_ForwardSolve)->Arg(64)->Arg(128)->Arg(256);

void BM_DiskOracle(benchmark::State& state) {
    const auto dirs = uniform_directions(16);
    const IncidentWave wave(8.0, kTheta);
    for (auto _ : state) {
        benchmark::DoNotOptimize(disk_oracle(2.0, {0, 0}, wave, dirs));
    }
}
BENCHMARK(BM_DiskOracle);

void BM_JacobianAssembly(benchmark::State& state) {
    const int degree = static_cast<int>(state.range(0));
    const auto flower = TrigShape::flower(2.0, 0.3, 4);
    const auto dirs = uniform_directions(16);
    const IncidentWave wave(4.0, kTheta);
    const HelmholtzSolver solver(flower, wave.k, 128);
    const Eigen::VectorXcd density = solver.scattering_density(wave.theta);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            assemble_jacobian(solver, wave.theta, density, dirs, degree));
    }
}
BENCHMARK(BM_JacobianAssembly)->Arg(3)->Arg(6)->Arg(12);

void BM_TikhonovStep(benchmark::State& state) {
    const auto flower = TrigShape::flower(2.0, 0.3, 4);
    const auto dirs = uniform_directions(16);
    const IncidentWave wave(4.0, kTheta);
    const JacobianMatrix jac = assemble_jacobian(flower, wave, dirs, 12, 128);
    const Eigen::VectorXd residual = Eigen::VectorXd::Ones(jac.matrix.rows());
    for (auto _ : state) {
        benchmark::DoNotOptimize(tikhonov_step(jac, residual, 1e-2));
    }
}
BENCHMARK(BM_TikhonovStep);

} // namespace

BENCHMARK_MAIN();
