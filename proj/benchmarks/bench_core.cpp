#include <benchmark/benchmark.h>

#include "invex2d/invex2d.hpp"

using namespace invex2d;

namespace {

Problem2D crescent() {
  return Problem2D(parse_expression("x1"),
                   {{"hole", parse_expression("1 - x1^2 - x2^2"), false},
                    {"cut", parse_expression("-x1 - 0.5"), false}},
                   Box2{-2, 2, -2, 2});
}

void BM_ParseDifferentiate(benchmark::State& state) {
  for (auto _ : state) {
    const Function f(parse_expression("-(x1 - 2)^2 - 2*(x2 - 1)^2 + 0.5*x1*x2 + sin(x1*x2)"));
    benchmark::DoNotOptimize(f.gradient({0.1, 0.2}));
  }
}
BENCHMARK(BM_ParseDifferentiate);

void BM_CompiledEval(benchmark::State& state) {
  const CompiledExpression c(parse_expression("(x1 - 1)^2 + 3*x1*x2 - exp(x2/4)"));
  Point2 x{0.3, -0.4};
  for (auto _ : state) {
    x.x1 += 1e-9;
    benchmark::DoNotOptimize(c(x));
  }
}
BENCHMARK(BM_CompiledEval);

void BM_TraceCircle(benchmark::State& state) {
  const Problem2D p(parse_expression("x1"), {{"g", parse_expression("x1^2 + x2^2 - 1"), true}},
                    Box2{-2, 2, -2, 2});
  const double step = 0.04 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(trace_boundary(p, {1, 0}, step).length);
}
BENCHMARK(BM_TraceCircle)->Arg(1)->Arg(4)->Arg(16);

void BM_FindKkt(benchmark::State& state) {
  const Problem2D p = crescent();
  const auto paths = trace_all_boundaries(p);
  for (auto _ : state) benchmark::DoNotOptimize(find_kkt_points(p, paths).size());
}
BENCHMARK(BM_FindKkt);

void BM_CheckBoundaryInvex(benchmark::State& state) {
  const Problem2D p = crescent();
  for (auto _ : state) benchmark::DoNotOptimize(check_boundary_invex(p).verdict);
}
BENCHMARK(BM_CheckBoundaryInvex);

void BM_GridOracle(benchmark::State& state) {
  const Problem2D p = crescent();
  const GridSpec g = grid_for(p, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(grid_global_max(p, g).best_value);
}
BENCHMARK(BM_GridOracle)->Arg(201)->Arg(801)->Unit(benchmark::kMillisecond);

void BM_OpfInvex(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(opf::check_opf_invex({}, false).invexity.verdict);
  }
}
BENCHMARK(BM_OpfInvex)->Unit(benchmark::kMillisecond);

void BM_OpfMinWr(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(opf::min_wr_bound({}, 2001).violations);
}
BENCHMARK(BM_OpfMinWr)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
