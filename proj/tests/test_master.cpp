#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "vrpsd/lp.hpp"
#include "vrpsd/master.hpp"
#include "vrpsd/restocking.hpp"
#include "vrpsd/search.hpp"

using namespace vrpsd;
using namespace vrpsd::testing;

namespace {

Instance toy() {
  std::vector<DiscreteDistribution> dem{DiscreteDistribution::deterministic(3), DiscreteDistribution::deterministic(4),
                                        DiscreteDistribution::deterministic(2)};
  return make_instance({{0, 0}, {10, 0}, {10, 2}, {-5, 5}}, 10, dem);
}

RouteCostFn optimal_cost(const Instance& inst) {
  return [&inst](std::span<const int> r) { return eval_optimal(r, inst).cost; };
}

}  // namespace

TEST_SUITE("master") {
  TEST_CASE("lp: small equality and covering program") {
    // min x0 + 2 x1 + 3 x2  s.t.  x0 + x1 = 1,  x1 + x2 >= 1
    lp::LinearProgram p;
    p.add_row(lp::RowSense::equal, 1.0);
    p.add_row(lp::RowSense::greater_equal, 1.0);
    const lp::Entry c0[] = {{0, 1.0}};
    const lp::Entry c1[] = {{0, 1.0}, {1, 1.0}};
    const lp::Entry c2[] = {{1, 1.0}};
    p.add_column(1.0, c0);
    p.add_column(2.0, c1);
    p.add_column(3.0, c2);
    REQUIRE(p.solve() == lp::Status::optimal);
    CHECK(p.objective() == doctest::Approx(2.0));
    CHECK(p.value(1) == doctest::Approx(1.0));
    // Strong duality and dual feasibility.
    CHECK(p.dual(0) + p.dual(1) == doctest::Approx(2.0));
    CHECK(p.dual(1) >= -1e-9);
    for (int j = 0; j < 3; ++j) CHECK(p.reduced_cost(j) >= -1e-9);
  }

  TEST_CASE("lp: infeasible program is reported") {
    lp::LinearProgram p;
    p.add_row(lp::RowSense::equal, 1.0);
    const lp::Entry c0[] = {{0, 2.0}};
    p.add_column(1.0, c0);
    p.set_cost(0, 1.0);
    p.add_row(lp::RowSense::equal, 3.0, std::vector<lp::Entry>{{0, 1.0}});
    CHECK(p.solve() == lp::Status::infeasible);
  }

  TEST_CASE("lp: warm start after adding columns and rows") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(1.0, 10.0);
    lp::LinearProgram warm;
    const int m = 6;
    for (int i = 0; i < m; ++i) warm.add_row(lp::RowSense::equal, 1.0);
    std::vector<std::vector<lp::Entry>> cols;
    std::vector<double> costs;
    for (int i = 0; i < m; ++i) {
      cols.push_back({{i, 1.0}});
      costs.push_back(u(rng) + 10.0);
    }
    for (std::size_t k = 0; k < cols.size(); ++k) warm.add_column(costs[k], cols[k]);
    REQUIRE(warm.solve() == lp::Status::optimal);
    std::bernoulli_distribution coin(0.4);
    for (int t = 0; t < 30; ++t) {
      std::vector<lp::Entry> col;
      for (int i = 0; i < m; ++i)
        if (coin(rng)) col.push_back({i, 1.0});
      if (col.empty()) continue;
      cols.push_back(col);
      costs.push_back(u(rng) * static_cast<double>(col.size()) * 0.7);
      warm.add_column(costs.back(), col);
      REQUIRE(warm.solve() == lp::Status::optimal);
      lp::LinearProgram cold;
      for (int i = 0; i < m; ++i) cold.add_row(lp::RowSense::equal, 1.0);
      for (std::size_t k = 0; k < cols.size(); ++k) cold.add_column(costs[k], cols[k]);
      REQUIRE(cold.solve() == lp::Status::optimal);
      CHECK(warm.objective() == doctest::Approx(cold.objective()).epsilon(1e-9));
    }
  }

  TEST_CASE("singleton columns give the sum of singleton costs") {
    const Instance inst = toy();
    Master m(inst, std::nullopt, optimal_cost(inst));
    CHECK(m.columns().size() == 3);
    REQUIRE(m.solve() == lp::Status::optimal);
    double sum = 0.0;
    for (int i = 1; i <= 3; ++i) sum += eval_optimal(Route{i}, inst).cost;
    CHECK(m.objective() == doctest::Approx(sum));
    for (int i = 1; i <= 3; ++i) {
      CHECK(m.theta()[static_cast<std::size_t>(i) - 1] == doctest::Approx(1.0));
      CHECK(m.duals().alpha[static_cast<std::size_t>(i)] == doctest::Approx(eval_optimal(Route{i}, inst).cost));
    }
    CHECK(m.artificial_mass() == doctest::Approx(0.0));
  }

  TEST_CASE("a cheaper pair column enters and lowers the objective") {
    const Instance inst = toy();
    Master m(inst, std::nullopt, optimal_cost(inst));
    REQUIRE(m.solve() == lp::Status::optimal);
    const double before = m.objective();
    const Route pair{1, 2};
    const double c = eval_optimal(pair, inst).cost;
    REQUIRE(c < eval_optimal(Route{1}, inst).cost + eval_optimal(Route{2}, inst).cost);
    const int id = m.add_column(make_column(pair, c, inst));
    CHECK(m.reduced_cost(id) < 0.0);
    REQUIRE(m.solve() == lp::Status::optimal);
    CHECK(m.objective() < before);
    CHECK(m.theta()[static_cast<std::size_t>(id)] == doctest::Approx(1.0));
  }

  TEST_CASE("fixed fleet keeps artificials until pricing supplies routes") {
    const Instance inst = toy();
    Master m(inst, 2, optimal_cost(inst));
    REQUIRE(m.solve() == lp::Status::optimal);
    CHECK(m.artificial_mass() > 0.5);
    CHECK(m.objective() >= m.big_m() * 0.5);
    m.add_column(make_column(Route{1, 2}, eval_optimal(Route{1, 2}, inst).cost, inst));
    REQUIRE(m.solve() == lp::Status::optimal);
    CHECK(m.artificial_mass() == doctest::Approx(0.0));
    CHECK(m.objective() < m.big_m());
  }

  TEST_CASE("big-M leaves the basis on acceptance instances") {
    for (const char* name : {"P-n16-k8", "P-n19-k2"}) {
      const Instance inst = parse_instance(instance_path(name));
      double depots = 0.0;
      for (int i = 1; i <= inst.n_customers(); ++i) depots += inst.d(0, i) + inst.d(i, 0);
      SolveConfig cfg;
      cfg.time_limit_s = 300.0;
      const auto res = solve(inst, cfg);
      REQUIRE(res.incumbent);
      CHECK(res.incumbent->objective < 10.0 * depots);
      for (double c : res.incumbent->costs) CHECK(c < 10.0 * depots);
    }
  }

  TEST_CASE("duplicate routes are not pooled twice") {
    const Instance inst = toy();
    Master m(inst, std::nullopt, optimal_cost(inst));
    const Route r{2, 3};
    CHECK(m.add_column(make_column(r, eval_optimal(r, inst).cost, inst)) >= 0);
    CHECK(m.add_column(make_column(r, eval_optimal(r, inst).cost, inst)) == -1);
    const Route rev{3, 2};
    CHECK(m.add_column(make_column(rev, eval_optimal(rev, inst).cost, inst)) >= 0);
  }

  TEST_CASE("twenty new columns are all added") {
    const Instance inst = parse_instance(instance_path("P-n16-k8"));
    Master m(inst, std::nullopt, optimal_cost(inst));
    std::vector<Column> cols;
    for (int i = 1; i <= 10; ++i)
      for (int j : {i % 15 + 1, (i + 4) % 15 + 1}) {
        const Route r{i, j};
        if (i != j) cols.push_back(make_column(r, eval_optimal(r, inst).cost, inst));
      }
    REQUIRE(cols.size() == 20);
    CHECK(m.add_columns(cols) == 20);
    CHECK(m.add_columns(cols) == 0);
  }

  TEST_CASE("adding a negative column never raises the objective") {
    const Instance inst = parse_instance(instance_path("P-n16-k8"));
    Master m(inst, std::nullopt, optimal_cost(inst));
    REQUIRE(m.solve() == lp::Status::optimal);
    const NgSets ng(inst);
    CutPool cuts;
    double prev = m.objective();
    for (int it = 0; it < 15; ++it) {
      PricingOptions opt;
      opt.max_columns = 5;
      const auto res = price(inst, m.duals(), cuts, ng, ArcFilter(inst.n_nodes()), opt);
      if (res.routes.empty()) break;
      for (const auto& r : res.routes) m.add_column(make_column(r.route, r.cost, inst));
      REQUIRE(m.solve() == lp::Status::optimal);
      CHECK(m.objective() <= prev + 1e-7);
      prev = m.objective();
    }
  }

  TEST_CASE("root bound of P-n16-k8 stays below the optimum") {
    const Instance inst = parse_instance(instance_path("P-n16-k8"));
    SolveConfig cfg;
    cfg.time_limit_s = 300.0;
    const auto res = solve(inst, cfg);
    CHECK(res.stats.root_lb <= 514.640 + 1e-3);
    CHECK(res.stats.root_lb > 0.0);
  }

  TEST_CASE("penalties and the certified bound") {
    const Instance inst = toy();
    Master m(inst, std::nullopt, optimal_cost(inst));
    REQUIRE(m.solve() == lp::Status::optimal);
    CHECK_THROWS_AS((void)m.lower_bound_valid(), std::logic_error);
    m.certify();
    CHECK(m.lower_bound_valid() == doctest::Approx(m.objective()));
    m.set_penalized(0, true);
    REQUIRE(m.solve() == lp::Status::optimal);
    CHECK(m.penalized(0));
    CHECK(m.penalized_mass() + m.artificial_mass() == doctest::Approx(1.0));
  }

  TEST_CASE("arc flows of a fractional solution") {
    const Instance inst = toy();
    std::vector<Column> cols{make_column(Route{1, 2}, 1.0, inst), make_column(Route{1, 2, 3}, 1.0, inst)};
    const std::vector<double> theta{0.5, 0.5};
    const auto x = arc_flows(cols, theta, inst.n_nodes());
    CHECK(x(1, 2) == doctest::Approx(1.0));
    CHECK(x(0, 1) == doctest::Approx(1.0));
    CHECK(x(2, 0) == doctest::Approx(0.5));
    CHECK(x(2, 3) == doctest::Approx(0.5));
    const std::vector<double> integral{1.0, 0.0};
    const auto y = arc_flows(cols, integral, inst.n_nodes());
    for (int i = 0; i < inst.n_nodes(); ++i)
      for (int j = 0; j < inst.n_nodes(); ++j) CHECK((y(i, j) == 0.0 || y(i, j) == 1.0));
  }

  TEST_CASE("column bookkeeping") {
    const Instance inst = toy();
    const Column c = make_column(Route{1, 3, 1}, 5.0, inst);
    CHECK(c.visits(1) == 2);
    CHECK_FALSE(c.elementary());
    CHECK(c.arc_count(1, 3) == 1);
    CHECK(c.arc_count(0, 1) == 1);
    CHECK(c.arcs().size() == 4);
    CHECK(route_hash(Route{1, 3}) != route_hash(Route{3, 1}));
  }
}
