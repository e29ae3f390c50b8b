#include <benchmark/benchmark.h>

#include <cmath>

#include "qhkit/maps.hpp"
#include "qhkit/qh_metric.hpp"
#include "qhkit/qh_paths.hpp"

namespace {

using namespace qhkit;

const Domain& disk() {
  static const Domain d = Domain::ball(Point{0.0, 0.0}, 1.0);
  return d;
}

const Domain& half() {
  static const Domain d = Domain::upper_half_plane(Box{Point{-2.3, 0.0}, Point{2.3, 3.0}});
  return d;
}

void BM_SegmentLength(benchmark::State& state) {
  const double tol = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qh_segment_length(disk(), Point{-0.6, 0.1}, Point{0.7, -0.3}, tol));
  }
}
BENCHMARK(BM_SegmentLength)->Arg(6)->Arg(8)->Arg(10);

void BM_BuildGraph(benchmark::State& state) {
  const double h = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_path_graph(half(), h, 1));
}
BENCHMARK(BM_BuildGraph)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_ShortestArc(benchmark::State& state) {
  static const PathGraph g = build_path_graph(half(), 0.02, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qh_shortest_arc(half(), g, Point{-1.5, 0.2}, Point{1.4, 1.7}));
  }
}
BENCHMARK(BM_ShortestArc)->Unit(benchmark::kMillisecond);

void BM_WeakQs(benchmark::State& state) {
  const Map f(MoebiusMap{Point{0.5, 0.0}});
  for (auto _ : state) {
    benchmark::DoNotOptimize(weak_qs_estimate(f, disk(), static_cast<std::size_t>(state.range(0)), 3));
  }
}
BENCHMARK(BM_WeakQs)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
