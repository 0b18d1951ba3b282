#include <benchmark/benchmark.h>

#include "vrpsd/master.hpp"
#include "vrpsd/pricing.hpp"
#include "vrpsd/restocking.hpp"

namespace {

vrpsd::Instance load(const char* name) {
  return vrpsd::parse_instance(std::string(VRPSD_BENCH_DATA_DIR) + "/instances/" + name + ".vrp");
}

// Duals after a few rounds of column generation, so the labeling sees realistic values.
vrpsd::DualValues warm_duals(const vrpsd::Instance& inst, int rounds) {
  vrpsd::Master m(inst, std::nullopt, [&](std::span<const int> r) { return vrpsd::eval_optimal(r, inst).cost; });
  m.solve();
  const vrpsd::NgSets ng(inst);
  vrpsd::CutPool cuts;
  for (int k = 0; k < rounds; ++k) {
    vrpsd::PricingOptions opt;
    opt.mode = vrpsd::PricingMode::heuristic;
    opt.arc_limit = 6;
    const auto res = vrpsd::price(inst, m.duals(), cuts, ng, vrpsd::ArcFilter(inst.n_nodes()), opt);
    if (res.routes.empty()) break;
    for (const auto& r : res.routes) m.add_column(vrpsd::make_column(r.route, r.cost, inst));
    m.solve();
  }
  return m.duals();
}

void BM_Pricing(benchmark::State& state, const char* name, vrpsd::PricingMode mode) {
  const auto inst = load(name);
  const auto duals = warm_duals(inst, 15);
  const vrpsd::NgSets ng(inst);
  const vrpsd::CutPool cuts;
  const vrpsd::ArcFilter filter(inst.n_nodes());
  vrpsd::PricingOptions opt;
  opt.mode = mode;
  long labels = 0;
  for (auto _ : state) {
    const auto res = vrpsd::price(inst, duals, cuts, ng, filter, opt);
    labels = res.labels_created;
    benchmark::DoNotOptimize(res.best_reduced_cost);
  }
  state.counters["labels"] = static_cast<double>(labels);
}
BENCHMARK_CAPTURE(BM_Pricing, p16_exact, "P-n16-k8", vrpsd::PricingMode::exact)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Pricing, p16_heuristic, "P-n16-k8", vrpsd::PricingMode::heuristic)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Pricing, a32_heuristic, "A-n32-k5", vrpsd::PricingMode::heuristic)->Unit(benchmark::kMillisecond);

void BM_Bounds(benchmark::State& state) {
  const auto inst = load("A-n32-k5");
  const auto duals = warm_duals(inst, 5);
  const vrpsd::CutPool cuts;
  const vrpsd::GammaTable g(inst, duals, cuts);
  for (auto _ : state) benchmark::DoNotOptimize(vrpsd::precompute_bounds(inst, g).kappa.back());
}
BENCHMARK(BM_Bounds)->Unit(benchmark::kMicrosecond);

}  // namespace
