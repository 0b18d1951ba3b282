#include <benchmark/benchmark.h>

#include <random>

#include "vrpsd/lp.hpp"

namespace {

// Random set-partitioning LP: m rows, n columns of a few ones each plus slack singletons.
void BM_SimplexColdSolve(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> row(0, m - 1);
  std::uniform_real_distribution<double> cost(1.0, 10.0);
  std::vector<std::vector<vrpsd::lp::Entry>> cols;
  std::vector<double> costs;
  for (int i = 0; i < m; ++i) {
    cols.push_back({{i, 1.0}});
    costs.push_back(100.0);
  }
  for (int j = 0; j < n; ++j) {
    std::vector<vrpsd::lp::Entry> c;
    for (int t = 0; t < 4; ++t) {
      const int r = row(rng);
      bool dup = false;
      for (const auto& e : c) dup = dup || e.index == r;
      if (!dup) c.push_back({r, 1.0});
    }
    cols.push_back(c);
    costs.push_back(cost(rng) * static_cast<double>(c.size()));
  }
  for (auto _ : state) {
    vrpsd::lp::LinearProgram lp;
    for (int i = 0; i < m; ++i) lp.add_row(vrpsd::lp::RowSense::equal, 1.0);
    for (std::size_t j = 0; j < cols.size(); ++j) lp.add_column(costs[j], cols[j]);
    benchmark::DoNotOptimize(lp.solve());
    state.counters["iterations"] = static_cast<double>(lp.stats().iterations);
  }
}
BENCHMARK(BM_SimplexColdSolve)->Args({30, 300})->Args({60, 1000})->Unit(benchmark::kMillisecond);

}  // namespace
