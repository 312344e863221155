#include <benchmark/benchmark.h>

#include <random>

#include "polyfix/certify.hpp"
#include "polyfix/problem.hpp"
#include "polyfix/topical.hpp"
#include "../tests/support/gen.hpp"

using namespace polyfix;
using namespace polyfix::testgen;

namespace {

void BM_FaceEnumerationSup(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    PolyhedralNorm N = PolyhedralNorm::builtin(NormKind::sup, n);
    benchmark::DoNotOptimize(N.face_count());
  }
}
BENCHMARK(BM_FaceEnumerationSup)->Arg(3)->Arg(5)->Arg(6);

void BM_FaceEnumerationCustom(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto points = PolyhedralNorm::builtin(NormKind::sup, n).dual_extreme_points();
  for (auto _ : state) {
    PolyhedralNorm N = PolyhedralNorm::custom(points);
    benchmark::DoNotOptimize(N.face_count());
  }
}
BENCHMARK(BM_FaceEnumerationCustom)->Arg(3)->Arg(4);

void BM_RayRestriction(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const int n = 4;
  MapExpr f = rnd_sup_nonexpansive(rng, n, 4);
  PolyhedralNorm N = PolyhedralNorm::builtin(NormKind::sup, n);
  const FaceDescriptor& F = N.proper_faces()[7];
  RatVec zero(n, Rat(0));
  for (auto _ : state) {
    Pwa1 g = restrict_to_ray(f, zero, F.representative, F.dual_representative);
    benchmark::DoNotOptimize(g.piece_count());
  }
}
BENCHMARK(BM_RayRestriction);

void BM_CertifySurjective(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  PolyhedralNorm N = PolyhedralNorm::builtin(NormKind::sup, n);
  MapExpr f = clip_cycle_flip_map(n, 0b001, 0b010);
  for (auto _ : state) {
    Certificate c = certify_surjective(f, N);
    benchmark::DoNotOptimize(c.verdict);
  }
}
BENCHMARK(BM_CertifySurjective)->Arg(3)->Arg(4)->Arg(5);

void BM_TopicalMethods(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const int n = 4;
  MapExpr T = rnd_min_max(rng, n);
  TopicalMethod method = static_cast<TopicalMethod>(state.range(0));
  for (auto _ : state) {
    Certificate c = certify_topical(T, method);
    benchmark::DoNotOptimize(c.verdict);
  }
}
BENCHMARK(BM_TopicalMethods)
    ->Arg(static_cast<int>(TopicalMethod::hypergraph))
    ->Arg(static_cast<int>(TopicalMethod::hypergraph_reach));

void BM_ConvexMaxPlus(benchmark::State& state) {
  std::mt19937_64 rng(9);
  const int n = static_cast<int>(state.range(0));
  MapExpr T = rnd_max_plus(rng, n);
  for (auto _ : state) {
    Certificate c = certify_topical(T, TopicalMethod::convex);
    benchmark::DoNotOptimize(c.verdict);
  }
}
BENCHMARK(BM_ConvexMaxPlus)->Arg(4)->Arg(6)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
