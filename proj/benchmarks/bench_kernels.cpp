// Micro benchmarks for the hot kernels: coordinate distances, projections,
// exact PGA and the closed-form expansion.

#include "benchmark/benchmark.h"
#include "pgakit/experiments.hpp"
#include "pgakit/pga.hpp"
#include "pgakit/random.hpp"

namespace {

using namespace pgakit;

ManifoldKind kind_of(int64_t k) { return static_cast<ManifoldKind>(k); }

void BM_Dist2(benchmark::State& state) {
  ManifoldPtr M = make_manifold(kind_of(state.range(0)), static_cast<int>(state.range(1)));
  SplitMix64 rng(1);
  Vec x = 0.3 * rng.normal_vector(M->dim()), y = 0.3 * rng.normal_vector(M->dim());
  for (auto _ : state) benchmark::DoNotOptimize(M->dist2(x, y));
}
BENCHMARK(BM_Dist2)->Args({0, 10})->Args({1, 3})->Args({1, 6})->Args({2, 3})->Args({2, 6});

void BM_ProjectGeodesic(benchmark::State& state) {
  ManifoldPtr M = make_manifold(kind_of(state.range(0)), 3);
  SplitMix64 rng(2);
  Mat W = random_orthonormal(rng, M->dim(), 1);
  Vec y = 0.4 * rng.normal_vector(M->dim());
  for (auto _ : state) benchmark::DoNotOptimize(project_coords_fast(*M, W, y).s);
}
BENCHMARK(BM_ProjectGeodesic)->Arg(0)->Arg(1)->Arg(2);

void BM_ExactPga(benchmark::State& state) {
  ManifoldPtr M = make_manifold(kind_of(state.range(0)), 3);
  TangentDataset d = anisotropic_dataset(M, static_cast<int>(state.range(1)), 3);
  d.eps = 0.3;
  for (auto _ : state) benchmark::DoNotOptimize(exact_pga_coords(d, 2).v);
}
BENCHMARK(BM_ExactPga)->Args({0, 50})->Args({1, 50})->Args({1, 200})->Args({2, 50})->Unit(benchmark::kMillisecond);

void BM_Expansion(benchmark::State& state) {
  ManifoldPtr M = make_manifold(kind_of(state.range(0)), static_cast<int>(state.range(1)));
  TangentDataset d = anisotropic_dataset(M, 100, 4);
  for (auto _ : state) benchmark::DoNotOptimize(expansion(d, 2).C);
}
BENCHMARK(BM_Expansion)->Args({0, 10})->Args({1, 3})->Args({2, 4})->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
