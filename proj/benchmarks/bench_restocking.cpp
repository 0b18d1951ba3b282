#include <benchmark/benchmark.h>

#include <numeric>

#include "vrpsd/restocking.hpp"

namespace {

vrpsd::Instance load(const char* name) {
  return vrpsd::parse_instance(std::string(VRPSD_BENCH_DATA_DIR) + "/instances/" + name + ".vrp");
}

void BM_EvalOptimal(benchmark::State& state) {
  const auto inst = load("A-n32-k5");
  // First `len` customers whose mean load fits.
  vrpsd::Route r;
  double load = 0.0;
  for (int i = 1; i <= inst.n_customers() && static_cast<int>(r.size()) < state.range(0); ++i) {
    if (load + inst.mean_demand(i) > inst.max_load()) continue;
    load += inst.mean_demand(i);
    r.push_back(i);
  }
  for (auto _ : state) benchmark::DoNotOptimize(vrpsd::eval_optimal(r, inst).cost);
  state.SetLabel(std::to_string(r.size()) + " customers");
}
BENCHMARK(BM_EvalOptimal)->Arg(3)->Arg(6)->Arg(10);

void BM_EvalDtd(benchmark::State& state) {
  const auto inst = load("P-n16-k8");
  const vrpsd::Route r{1, 2, 3};
  for (auto _ : state) benchmark::DoNotOptimize(vrpsd::eval_dtd(r, inst));
}
BENCHMARK(BM_EvalDtd);

void BM_Simulate(benchmark::State& state) {
  const auto inst = load("P-n16-k8");
  const vrpsd::Route r{1, 2, 3};
  const auto ev = vrpsd::eval_optimal(r, inst);
  for (auto _ : state) benchmark::DoNotOptimize(vrpsd::simulate(r, ev.table, inst, 1000, 7).mean);
}
BENCHMARK(BM_Simulate);

}  // namespace
