#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "vrpsd/restocking.hpp"

using namespace vrpsd;
using namespace vrpsd::testing;

namespace {

Instance single_customer(int demand) {
  return make_instance({{0, 0}, {3, 4}}, 10, {DiscreteDistribution::deterministic(demand)});
}

std::vector<Route> read_route_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<Route> out;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream is(line);
    Route r;
    int c = 0;
    while (is >> c) r.push_back(c);
    if (!r.empty()) out.push_back(r);
  }
  return out;
}

}  // namespace

TEST_SUITE("restocking") {
  TEST_CASE("trip counts") {
    CHECK(trips(5, 10, 10) == 0);
    CHECK(trips(11, 10, 10) == 1);
    CHECK(trips(25, 4, 10) == 3);
    CHECK(trips(10, 10, 10) == 0);
    CHECK(trips(20, 0, 10) == 2);
  }

  TEST_CASE("single deterministic customer") {
    const Route r{1};
    CHECK(eval_optimal(r, single_customer(7)).cost == doctest::Approx(10.0));
    CHECK(eval_dtd(r, single_customer(7)) == doctest::Approx(10.0));
  }

  TEST_CASE("single customer needing a forced refill") {
    const Instance inst = make_instance({{0, 0}, {3, 4}}, 10, {DiscreteDistribution::deterministic(15)}, 2.0);
    CHECK(eval_optimal(Route{1}, inst).cost == doctest::Approx(20.0));
    CHECK(eval_dtd(Route{1}, inst) == doctest::Approx(20.0));
  }

  TEST_CASE("value table bounds the remaining a priori cost") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 50; ++t) {
      RandomSpec spec;
      spec.n = 5;
      spec.capacity = 12;
      spec.load_factor = 1.5;
      // Unit-mass pmfs: truncated Poisson mass would shave a little off every value.
      spec.small_support = 5;
      const Instance inst = random_instance(rng, spec);
      Route r{1, 2, 3, 4, 5};
      std::shuffle(r.begin(), r.end(), rng);
      const auto ev = eval_optimal(r, inst);
      double suffix = inst.d(r.back(), 0);
      for (int pos = static_cast<int>(r.size()); pos >= 1; --pos) {
        for (int q = 0; q <= inst.capacity(); ++q) CHECK(ev.table.value(pos, q) >= suffix - 1e-9);
        if (pos >= 2) suffix += inst.d(r[static_cast<std::size_t>(pos) - 2], r[static_cast<std::size_t>(pos) - 1]);
      }
      CHECK(ev.cost == doctest::Approx(ev.table.value(0, inst.capacity())));
    }
  }

  TEST_CASE("three-customer routes match the realization tree") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 100; ++t) {
      RandomSpec spec;
      spec.n = 3;
      spec.capacity = 8;
      spec.lambda_lo = 1.0;
      spec.lambda_hi = 5.0;
      spec.load_factor = 1.8;
      const Instance inst = random_instance(rng, spec);
      const Route r{1, 2, 3};
      CHECK(eval_optimal(r, inst).cost == doctest::Approx(policy_tree_cost(r, inst)).epsilon(1e-9));
    }
  }

  TEST_CASE("detour-to-depot never beats the optimal policy") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 200; ++t) {
      RandomSpec spec;
      spec.n = 4;
      spec.capacity = 10;
      spec.load_factor = 1.5;
      spec.small_support = 4;
      const Instance inst = random_instance(rng, spec);
      const Route r{4, 2, 1, 3};
      CHECK(eval_dtd(r, inst) >= eval_optimal(r, inst).cost - 1e-9);
    }
  }

  TEST_CASE("a far second customer makes preventive refills pay") {
    // First customer near the depot takes nearly the whole load; the second is far out.
    std::vector<DiscreteDistribution> dem{DiscreteDistribution(8, {0.5, 0.5}), DiscreteDistribution(1, {0.5, 0.5})};
    const Instance inst = make_instance({{0, 0}, {1, 0}, {100, 0}}, 10, dem, 2.0);
    const Route r{1, 2};
    const auto opt = eval_optimal(r, inst);
    CHECK(eval_dtd(r, inst) > opt.cost + 1.0);
    CHECK(opt.table.preventive_restock_states() > 0);
    CHECK(opt.cost == doctest::Approx(policy_tree_cost(r, inst)));
  }

  TEST_CASE("deterministic demands simulate exactly") {
    std::vector<DiscreteDistribution> dem{DiscreteDistribution::deterministic(4), DiscreteDistribution::deterministic(9),
                                          DiscreteDistribution::deterministic(3)};
    const Instance inst = make_instance({{0, 0}, {2, 5}, {7, 1}, {-3, 4}}, 10, dem, 2.0);
    const Route r{1, 2, 3};
    const auto ev = eval_optimal(r, inst);
    const auto sim = simulate(r, ev.table, inst, 1000, 1);
    CHECK(sim.std_err == 0.0);
    CHECK(sim.mean == doctest::Approx(ev.cost));
  }

  TEST_CASE("simulation agrees with the expectation and is reproducible") {
    const Instance inst = parse_instance(instance_path("P-n16-k8"));
    const Route r{1, 2, 3, 4};
    const auto ev = eval_optimal(r, inst);
    const auto a = simulate(r, ev.table, inst, 100000, 42);
    const auto b = simulate(r, ev.table, inst, 100000, 42);
    CHECK(a.mean == b.mean);
    CHECK(std::abs(a.mean - ev.cost) <= 4.0 * a.std_err + 1e-3);
  }

  TEST_CASE("P-n19-k2 load factor 1.05 optimal routes") {
    InstanceConfig cfg;
    cfg.load_factor = 1.05;
    const Instance inst = parse_instance(instance_path("P-n19-k2"), cfg);
    const auto routes = read_route_file(data_dir() / "routes" / "P-n19-k2-f1.05.txt");
    REQUIRE(routes.size() == 2);
    std::vector<double> costs;
    for (const auto& r : routes) costs.push_back(eval_optimal(r, inst).cost);
    std::sort(costs.begin(), costs.end());
    CHECK(costs[0] == doctest::Approx(92.663).epsilon(0.0005 / 92.663));
    CHECK(costs[1] == doctest::Approx(121.182).epsilon(0.0005 / 121.182));
  }

  TEST_CASE("policy dispatch") {
    const Instance inst = parse_instance(instance_path("P-n16-k8"));
    const Route r{5, 9, 2};
    CHECK(eval_route(r, inst, RestockPolicy::optimal) == doctest::Approx(eval_optimal(r, inst).cost));
    CHECK(eval_route(r, inst, RestockPolicy::detour_to_depot) == doctest::Approx(eval_dtd(r, inst)));
    CHECK(eval_route(r, inst, RestockPolicy::optimal) >= apriori_cost(r, inst) - 1e-9);
  }
}
