#include <benchmark/benchmark.h>

#include <random>

#include "mlab/asymptotics.hpp"
#include "mlab/fft.hpp"
#include "mlab/kernels.hpp"
#include "mlab/multiplier.hpp"
#include "mlab/random.hpp"
#include "mlab/rearrange.hpp"

using namespace mlab;

namespace {

SampledFunction noise(std::size_t n, std::size_t dim) {
  auto rng = random::stream(1, 0);
  std::normal_distribution<double> g;
  std::vector<Axis> axes(dim, Axis{0, 4, n});
  auto f = SampledFunction::zeros(axes);
  for (auto& z : f.mutable_values()) z = {g(rng), g(rng)};
  return f;
}

void BM_Rearrangement(benchmark::State& state) {
  auto f = noise(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(rearrange::rearrangement(f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Rearrangement)->RangeMultiplier(4)->Range(1 << 8, 1 << 18)->Complexity();

void BM_LorentzNorm(benchmark::State& state) {
  auto p = rearrange::rearrangement(noise(static_cast<std::size_t>(state.range(0)), 1));
  auto w = weights::WeightFunction::phi(0.5, 1);
  for (auto _ : state) benchmark::DoNotOptimize(rearrange::lorentz_norm(p, w));
}
BENCHMARK(BM_LorentzNorm)->Range(1 << 8, 1 << 16);

void BM_Fft2d(benchmark::State& state) {
  auto f = noise(static_cast<std::size_t>(state.range(0)), 2);
  auto shape = f.shape();
  std::vector<cplx> data = f.values();
  for (auto _ : state) {
    fft::transform(data, shape, -1);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_Fft2d)->RangeMultiplier(2)->Range(32, 512);

void BM_StrongMaximal2d(benchmark::State& state) {
  auto f = noise(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(asymptotics::strong_maximal(f, 2.0));
}
BENCHMARK(BM_StrongMaximal2d)->RangeMultiplier(2)->Range(16, 128);

void BM_EvalIntegral(benchmark::State& state) {
  std::vector<double> alpha(static_cast<std::size_t>(state.range(0)), 2.0), r(alpha.size(), 1.0);
  asymptotics::IntegralSpec spec(alpha, r, 1e6);
  for (auto _ : state) benchmark::DoNotOptimize(asymptotics::eval_integral(spec));
}
BENCHMARK(BM_EvalIntegral)->DenseRange(2, 4);

void BM_KernelTailMeasure(benchmark::State& state) {
  double lambda = static_cast<double>(state.range(0));
  kernels::tensor_kernel_measure({0.5, 0.5}, lambda);  // build the tables outside the loop
  for (auto _ : state) benchmark::DoNotOptimize(kernels::tensor_kernel_measure({0.5, 0.5}, lambda));
}
BENCHMARK(BM_KernelTailMeasure)->Arg(10)->Arg(1000000);

void BM_MarcinkiewiczConstant(benchmark::State& state) {
  Axis a{0, 8, 128};
  auto axes = multiplier::symbol_axes_for({a, a});
  multiplier::SymbolParams prm;
  prm.tau = {0.5, -0.5};
  auto sym = multiplier::catalog_symbol("marcinkiewicz", axes, {0.6, 0.6}, 4.0 / 3, prm);
  auto w = multiplier::k_weight(sym);
  for (auto _ : state) benchmark::DoNotOptimize(multiplier::marcinkiewicz_constant(sym, w));
}
BENCHMARK(BM_MarcinkiewiczConstant)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
