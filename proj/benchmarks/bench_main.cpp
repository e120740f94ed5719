#include <numbers>
#include <random>

#include <benchmark/benchmark.h>

#include "hspec/bound_engine.hpp"
#include "hspec/galerkin_assembly.hpp"
#include "hspec/operator_model.hpp"
#include "hspec/spectral_engine.hpp"

namespace {

const hspec::AssemblyConstants kGauss{2.0 / 3.0, std::numbers::pi * std::numbers::pi / 2.0};

void BM_GaussAssembly(benchmark::State& state) {
  const hspec::BranchFamily g = hspec::make_gauss_model();
  hspec::AssemblyOptions opts;
  opts.size = static_cast<std::size_t>(state.range(0));
  opts.branch_cut = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(hspec::assemble(g, opts, kGauss).entries.data());
}
BENCHMARK(BM_GaussAssembly)->Args({20, 1000})->Args({60, 1000})->Args({60, 10000})->Unit(benchmark::kMillisecond);

void BM_Eigenvalues(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) m(j, k) = {gauss(rng), gauss(rng)};
  }
  for (auto _ : state) benchmark::DoNotOptimize(hspec::eigenvalues(m).eigenvalues.data());
}
BENCHMARK(BM_Eigenvalues)->Arg(30)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);

void BM_BoundTable(benchmark::State& state) {
  const hspec::BoundParams p{static_cast<int>(state.range(0)), 0.5, 1.0};
  const auto n = static_cast<std::uint64_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(hspec::bound_table(n, p).data());
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_BoundTable)->Args({1, 1000})->Args({3, 1000})->Args({5, 10000})->Unit(benchmark::kMillisecond);

void BM_TailSum(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  long long k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(hspec::tail_sum(d, k++ % 200, 0.9));
}
BENCHMARK(BM_TailSum)->Arg(1)->Arg(5);

}  // namespace
BENCHMARK_MAIN();
