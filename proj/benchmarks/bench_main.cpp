#include <benchmark/benchmark.h>

#include "tomo/kernels.hpp"
#include "tomo/operators.hpp"
#include "tomo/quadratic.hpp"
#include "tomo/star_product.hpp"
#include "tomo/symplectic.hpp"
#include "tomo/thick.hpp"

using namespace tomo;

namespace {

PhaseSpaceFunction vacuum(int n) {
  return eval_state(StateSpec::coherent({0, 0}), make_grid(-8, 8, -8, 8, n, n));
}

void BM_radon_forward_grid(benchmark::State& state) {
  const auto f = vacuum(161);
  const auto xs = linspace(-6, 6, 121);
  const auto th = half_circle_angles(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(radon_forward_grid(f, xs, th));
}
BENCHMARK(BM_radon_forward_grid)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_radon_inverse(benchmark::State& state) {
  const auto w = radon_forward_grid(vacuum(161), linspace(-6, 6, 121), half_circle_angles(64));
  const int n = static_cast<int>(state.range(0));
  const auto target = make_grid(-5, 5, -5, 5, n, n);
  for (auto _ : state) benchmark::DoNotOptimize(radon_inverse(w, target));
}
BENCHMARK(BM_radon_inverse)->Arg(51)->Arg(101)->Unit(benchmark::kMillisecond);

void BM_thick_from_ideal(benchmark::State& state) {
  const auto w = radon_forward_grid(vacuum(161), linspace(-6, 6, 241), half_circle_angles(16));
  const auto xi = WindowFunction::rectangular(2.0);
  for (auto _ : state) benchmark::DoNotOptimize(thick_from_ideal(w, xi));
}
BENCHMARK(BM_thick_from_ideal)->Unit(benchmark::kMillisecond);

void BM_circle_forward(benchmark::State& state) {
  const auto f = vacuum(161);
  for (auto _ : state) benchmark::DoNotOptimize(circle_forward(f, {2.0, 0.3, -0.4}));
}
BENCHMARK(BM_circle_forward);

void BM_kernel_quadratic(benchmark::State& state) {
  const auto t = delta_smear(0.05);
  for (auto _ : state)
    benchmark::DoNotOptimize(kernel_quadratic({0.3, 0.2, -0.1}, {-0.2, 0.1, 0.3}, {0.1, 0.0, 0.1}, t));
}
BENCHMARK(BM_kernel_quadratic);

void BM_kernel_oracle(benchmark::State& state) {
  const KernelEvaluator k(SchemeSpec::quadratic(), KernelMode::Oracle);
  const auto t = delta_smear(0.05);
  for (auto _ : state) benchmark::DoNotOptimize(k({0.3, 0.2, -0.1}, {-0.2, 0.1, 0.3}, {0.1, 0.0, 0.1}, t));
}
BENCHMARK(BM_kernel_oracle)->Unit(benchmark::kMillisecond);

void BM_groenewald_product(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto grid = make_grid(-6, 6, -6, 6, n, n);
  const auto f = eval_state(StateSpec::coherent({0.4, 0.1}), grid);
  const auto g = eval_state(StateSpec::fock(1), grid);
  for (auto _ : state) benchmark::DoNotOptimize(groenewald_product(f, g));
}
BENCHMARK(BM_groenewald_product)->Arg(61)->Arg(121)->Unit(benchmark::kMillisecond);

void BM_symplectic_star_product(benchmark::State& state) {
  const auto w = radon_forward_grid(vacuum(161), linspace(-6, 6, 121), half_circle_angles(64));
  const KernelEvaluator k(SchemeSpec::symplectic(), KernelMode::ClosedForm);
  for (auto _ : state) benchmark::DoNotOptimize(star_product(w, w, k));
}
BENCHMARK(BM_symplectic_star_product)->Unit(benchmark::kMillisecond);

void BM_tomographic_symbol(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const Operator rho = density_matrix(StateSpec::coherent({1, 0}), dim);
  for (auto _ : state)
    benchmark::DoNotOptimize(tomographic_symbol(rho, SchemeSpec::quadratic(), {1.0, 0.2, -0.3}));
}
BENCHMARK(BM_tomographic_symbol)->Arg(16)->Arg(24);

void BM_weyl_reconstruct(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const Operator rho = density_matrix(StateSpec::fock(1), dim);
  const auto f = weyl_symbol_grid(rho, make_grid(-8, 8, -8, 8, 161, 161));
  for (auto _ : state) benchmark::DoNotOptimize(weyl_reconstruct(f, dim));
}
BENCHMARK(BM_weyl_reconstruct)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
