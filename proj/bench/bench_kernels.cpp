// Parallel kernels against their serial references.
#include <benchmark/benchmark.h>

#include "realnc/envelope.hpp"
#include "realnc/fixtures.hpp"
#include "realnc/sampling.hpp"
#include "realnc/verify.hpp"

namespace {

using namespace realnc;

struct ConvexityCase {
  OperatorSystem sys;
  NcPolynomial f;
};

ConvexityCase convexity_case() {
  Rng rng(5);
  ConvexityCase c{random_system(rng, 3, {1, -1}), {}};
  c.f = random_convex_quadratic(rng, c.sys.signs(), 2);
  return c;
}

void BM_convexity(benchmark::State& state) {
  const ConvexityCase c = convexity_case();
  const int trials = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(is_convex_sampled(c.f, c.sys, trials, 7).convex);
}

void BM_convexity_serial(benchmark::State& state) {
  const ConvexityCase c = convexity_case();
  const int trials = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(is_convex_sampled_serial(c.f, c.sys, trials, 7).convex);
}

struct GridCase {
  Fixture fx;
  NcPoint x;
  AtomSet atoms;
  MatrixList grid;
};

GridCase grid_case() {
  GridCase g{load_fixture("interval"), {}, {}, direction_grid(2)};
  Rng rng(3);
  g.x = random_member(g.fx.system, rng, 2);
  std::vector<NcPoint> atoms;
  for (int i = 0; i < 6; ++i) atoms.push_back(random_member(g.fx.system, rng, 2));
  g.atoms = make_atom_set(g.fx.system, atoms, g.fx.function("neg_square"));
  return g;
}

void BM_envelope_grid(benchmark::State& state) {
  const GridCase g = grid_case();
  for (auto _ : state) {
    benchmark::DoNotOptimize(envelope_over_grid(g.fx.system, g.fx.function("neg_square"), g.x, g.atoms, g.grid));
  }
}

void BM_envelope_grid_serial(benchmark::State& state) {
  const GridCase g = grid_case();
  for (auto _ : state) {
    benchmark::DoNotOptimize(envelope_over_grid_serial(g.fx.system, g.fx.function("neg_square"), g.x, g.atoms, g.grid));
  }
}

void BM_suite(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_suite("sdp", 42, parallel).passed);
}

}  // namespace

BENCHMARK(BM_convexity)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_convexity_serial)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_envelope_grid)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_envelope_grid_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_suite)->ArgName("parallel")->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
