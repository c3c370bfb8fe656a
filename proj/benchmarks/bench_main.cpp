#include <benchmark/benchmark.h>

#include "exrot/metrics.hpp"
#include "exrot/model.hpp"
#include "exrot/rng.hpp"
#include "exrot/shatter.hpp"
#include "exrot/special.hpp"
#include "exrot/sphere.hpp"

namespace {

using namespace exrot;

void bm_normal_from_bits(benchmark::State& state) {
  std::uint64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(normal_from_bits(counter_hash(17, kDomainTrial, i++)));
  }
}
BENCHMARK(bm_normal_from_bits);

void bm_ensemble_sample(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    EdgeVectorEnsemble ens = EdgeVectorEnsemble::sample(n, 16, ++seed);
    benchmark::DoNotOptimize(ens.edge_vector(0).data());
  }
  state.SetItemsProcessed(state.iterations() * edge_count_of(n) * 16);
}
BENCHMARK(bm_ensemble_sample)->Arg(32)->Arg(64);

void bm_realize_graph(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  EdgeVectorEnsemble ens = EdgeVectorEnsemble::sample(n, 16, 9);
  Direction s = axis_direction(16);
  for (auto _ : state) {
    GraphRealization g = realize_graph(ens, s, 0.0);
    benchmark::DoNotOptimize(g.edge_count());
  }
  state.SetItemsProcessed(state.iterations() * ens.edge_count());
}
BENCHMARK(bm_realize_graph)->Arg(64)->Arg(128);

void bm_clique_number(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  EdgeVectorEnsemble ens = EdgeVectorEnsemble::sample(n, 8, 23);
  GraphRealization g = realize_graph(ens, axis_direction(8), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(clique_number(g));
}
BENCHMARK(bm_clique_number)->Arg(48)->Arg(64);

void bm_chromatic_bracket(benchmark::State& state) {
  EdgeVectorEnsemble ens = EdgeVectorEnsemble::sample(64, 8, 29);
  GraphRealization g = realize_graph(ens, axis_direction(8), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(chromatic_number(g, 0).upper);
}
BENCHMARK(bm_chromatic_bracket);

void bm_solve_sign_pattern(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  EdgeVectorEnsemble ens = EdgeVectorEnsemble::sample(10, d, 31);
  ShatterRequest req;
  req.t = 1.0;
  for (int v = 1; v <= 4; ++v) {
    req.edges.emplace_back(0, v);
    req.present.push_back(v % 2);
  }
  for (auto _ : state) {
    SolveOutcome out = solve_sign_pattern(ens, req);
    benchmark::DoNotOptimize(out.status);
  }
}
BENCHMARK(bm_solve_sign_pattern)->Arg(16)->Arg(64);

void bm_enumerate_sign_patterns(benchmark::State& state) {
  RngStream rng = derive_stream(41, kDomainTrial);
  std::vector<Direction> points;
  for (int i = 0; i < 10; ++i) points.push_back(sample_uniform_direction(3, rng));
  for (auto _ : state) {
    SignPatternSet set = enumerate_sign_patterns(points);
    benchmark::DoNotOptimize(set.patterns.size());
  }
}
BENCHMARK(bm_enumerate_sign_patterns);

}  // namespace

BENCHMARK_MAIN();
