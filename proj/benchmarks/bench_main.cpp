#include <benchmark/benchmark.h>

#include <random>

#include "sparsecut/instances.hpp"
#include "sparsecut/oracle.hpp"
#include "sparsecut/relaxations.hpp"
#include "sparsecut/rounding.hpp"
#include "sparsecut/stcut.hpp"

using namespace sparsecut;

namespace {

void BM_Oracle(benchmark::State& state) {
  const InstancePair p = gen_random({static_cast<int>(state.range(0)), 0.3, false, 1});
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_opt(p));
}
BENCHMARK(BM_Oracle)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Spectral(benchmark::State& state) {
  const InstancePair p = gen_expander_clique(static_cast<int>(state.range(0)), 3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_spectral(p));
}
BENCHMARK(BM_Spectral)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_LeightonRao(benchmark::State& state) {
  const InstancePair p = gen_random({static_cast<int>(state.range(0)), 0.3, false, 2});
  for (auto _ : state) benchmark::DoNotOptimize(solve_leighton_rao(p));
}
BENCHMARK(BM_LeightonRao)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_GoemansLinial(benchmark::State& state) {
  const InstancePair p = gen_random({static_cast<int>(state.range(0)), 0.3, true, 3});
  for (auto _ : state) benchmark::DoNotOptimize(solve_goemans_linial(p));
}
BENCHMARK(BM_GoemansLinial)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_RoundRank1(benchmark::State& state) {
  const InstancePair p = gen_random({static_cast<int>(state.range(0)), 0.3, true, 4});
  for (auto _ : state) benchmark::DoNotOptimize(round_rank1(p, 4));
}
BENCHMARK(BM_RoundRank1)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_Embed(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  VectorEmbedding pts;
  pts.points.resize(n, 16);
  for (int v = 0; v < n; ++v)
    for (int c = 0; c < 16; ++c) pts.points(v, c) = gauss(rng);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(l2_to_l1_embed(pts, ++seed));
}
BENCHMARK(BM_Embed)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_StCertificate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const InstancePair p = gen_random({n, 4.0 / n, false, 6});
  for (auto _ : state) benchmark::DoNotOptimize(st_certificate(p.g, 0, n - 1));
}
BENCHMARK(BM_StCertificate)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
