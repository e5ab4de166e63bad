#include <benchmark/benchmark.h>

#include <cmath>

#include "qclab/beltrami.hpp"
#include "qclab/dyadic.hpp"
#include "qclab/hausdorff.hpp"
#include "qclab/transforms.hpp"

using namespace qclab;

namespace {

ComplexField bump(const GridSpec& spec) {
  return ComplexField::from_function(spec, [](cplx z) { return cplx(std::exp(-std::norm(z) / 0.08)); });
}

void BM_Beurling(benchmark::State& state) {
  const GridSpec spec(4.0, static_cast<int>(state.range(0)));
  const ComplexField f = bump(spec);
  for (auto _ : state) benchmark::DoNotOptimize(beurling_transform(f));
}
BENCHMARK(BM_Beurling)->RangeMultiplier(2)->Range(128, 1024)->Unit(benchmark::kMillisecond);

void BM_PlanarCauchy(benchmark::State& state) {
  const GridSpec spec(4.0, static_cast<int>(state.range(0)));
  const ComplexField f = bump(spec);
  for (auto _ : state) benchmark::DoNotOptimize(planar_cauchy_transform(f));
}
BENCHMARK(BM_PlanarCauchy)->RangeMultiplier(2)->Range(128, 1024)->Unit(benchmark::kMillisecond);

// radial stretch, k = 1/3
void BM_SolveRadial(benchmark::State& state) {
  const GridSpec spec(4.0, static_cast<int>(state.range(0)));
  const ComplexField raw = ComplexField::from_function(spec, [](cplx z) {
    return std::abs(z) > 1.0 || z == cplx(0.0) ? cplx(0.0) : (1.0 / 3.0) * z / std::conj(z);
  });
  const BeltramiCoefficient mu = make_coefficient(raw, 1.0 / 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_principal(mu));
}
BENCHMARK(BM_SolveRadial)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_QuasilineK04(benchmark::State& state) {
  const GridSpec spec(2.0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(generate_quasiline(0.4, 5, spec));
}
BENCHMARK(BM_QuasilineK04)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_PackingAlpha(benchmark::State& state) {
  const SquareFamily fam = random_square_family(11, static_cast<int>(state.range(0)), 5, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(packing_alpha(fam, 1.0));
}
BENCHMARK(BM_PackingAlpha)->Arg(10)->Arg(50);

void BM_PackingAlphaEnumerated(benchmark::State& state) {
  const SquareFamily fam = random_square_family(11, static_cast<int>(state.range(0)), 5, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(packing_alpha_enumerated(fam, 1.0));
}
BENCHMARK(BM_PackingAlphaEnumerated)->Arg(10)->Arg(50);

void BM_Smoothness(benchmark::State& state) {
  const SquareFamily fam = random_square_family(11, 50, 5, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(smoothness_parts(fam));
}
BENCHMARK(BM_Smoothness);

}  // namespace

BENCHMARK_MAIN();
