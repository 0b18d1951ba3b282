#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "vrpsd/instance.hpp"

using namespace vrpsd;
using namespace vrpsd::testing;

namespace {

double poisson_pmf(double lambda, int k) { return std::exp(-lambda + k * std::log(lambda) - std::lgamma(k + 1.0)); }

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_SUITE("instance") {
  TEST_CASE("poisson truncation keeps the values above the threshold") {
    const auto d = truncate_poisson(1.0, 1e-5);
    CHECK(d.min_support() == 0);
    CHECK(d.max_support() == 7);
    CHECK(poisson_pmf(1.0, 8) < 1e-5);
    CHECK(poisson_pmf(1.0, 7) >= 1e-5);
    for (int k = 0; k <= 7; ++k) CHECK(d.prob(k) == doctest::Approx(poisson_pmf(1.0, k)).epsilon(1e-12));
    CHECK(d.mass() < 1.0);
  }

  TEST_CASE("poisson truncation matches the direct pmf over many rates") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> lam(0.3, 60.0);
    for (int t = 0; t < 200; ++t) {
      const double l = lam(rng);
      const auto d = truncate_poisson(l, 1e-5);
      double mean = 0.0;
      for (int k = d.min_support(); k <= d.max_support(); ++k) {
        CHECK(d.prob(k) >= 1e-5);
        CHECK(d.prob(k) == doctest::Approx(poisson_pmf(l, k)).epsilon(1e-10));
        mean += k * d.prob(k);
      }
      if (d.min_support() > 0) CHECK(poisson_pmf(l, d.min_support() - 1) < 1e-5);
      CHECK(poisson_pmf(l, d.max_support() + 1) < 1e-5);
      CHECK(d.mean() == doctest::Approx(mean).epsilon(1e-12));
      // Dropped mass is bounded by the number of dropped terms near the cut, times eps,
      // plus the geometric tail beyond.
      CHECK(d.mass() <= 1.0 + 1e-12);
      CHECK(d.mass() > 1.0 - 1e-3);
    }
  }

  TEST_CASE("degenerate poisson is rejected") {
    CHECK_THROWS_AS(truncate_poisson(1e-7, 1e-5), InstanceError);
  }

  TEST_CASE("euclidean distance of a 3-4-5 triangle") {
    const Instance inst = make_instance({{0, 0}, {3, 4}}, 10, {DiscreteDistribution::deterministic(3)});
    CHECK(inst.d(0, 1) == doctest::Approx(5.0));
    CHECK(inst.d(1, 0) == doctest::Approx(5.0));
    CHECK(inst.d(0, 0) == 0.0);
  }

  TEST_CASE("P-n16-k8 header") {
    const Instance inst = parse_instance(instance_path("P-n16-k8"));
    CHECK(inst.n_customers() == 15);
    CHECK(inst.capacity() == 35);
    CHECK(inst.min_fleet() == 8);
  }

  TEST_CASE("A-n32-k5 total mean demand") {
    const Instance inst = parse_instance(instance_path("A-n32-k5"));
    CHECK(inst.capacity() == 100);
    // Truncated means sit a hair below the Poisson rates.
    CHECK(inst.total_mean_demand() == doctest::Approx(410.0).epsilon(1e-4));
    std::vector<int> all(static_cast<std::size_t>(inst.n_customers()));
    std::iota(all.begin(), all.end(), 1);
    CHECK(route_load(all, inst) == doctest::Approx(inst.total_mean_demand()));
  }

  TEST_CASE("route load") {
    std::vector<DiscreteDistribution> dem{DiscreteDistribution::deterministic(7),
                                          DiscreteDistribution(3, {0.5, 0.5}),
                                          DiscreteDistribution(4, {0.75, 0.25})};
    const Instance inst = make_instance({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, 20, dem);
    CHECK(route_load(std::vector<int>{1}, inst) == doctest::Approx(7.0));
    CHECK(route_load(std::vector<int>{2, 3}, inst) == doctest::Approx(7.75));
    CHECK(route_load(std::vector<int>{3, 1, 2}, inst) == doctest::Approx(route_load(std::vector<int>{1, 2, 3}, inst)));
  }

  TEST_CASE("triangle inequality holds on loaded instances") {
    for (const char* name : {"P-n16-k8", "P-n19-k2", "A-n32-k5"}) {
      const Instance inst = parse_instance(instance_path(name));
      for (int i = 0; i < inst.n_nodes(); ++i)
        for (int j = 0; j < inst.n_nodes(); ++j)
          for (int k = 0; k < inst.n_nodes(); ++k) CHECK(inst.d(i, k) <= inst.d(i, j) + inst.d(j, k) + 1e-9);
    }
  }

  TEST_CASE("rounded distances are integers and tolerate small triangle violations") {
    InstanceConfig cfg;
    cfg.rounding = DistanceRounding::nearest_integer;
    const Instance inst = parse_instance(instance_path("A-n32-k5"), cfg);
    for (int i = 0; i < inst.n_nodes(); ++i)
      for (int j = 0; j < inst.n_nodes(); ++j) CHECK(inst.d(i, j) == std::round(inst.d(i, j)));
    CHECK(inst.triangle_violation() <= 1.0);
  }

  TEST_CASE("rounding a loaded instance matches rounding at parse time") {
    InstanceConfig cfg;
    cfg.rounding = DistanceRounding::nearest_integer;
    const Instance parsed = parse_instance(instance_path("P-n16-k8"), cfg);
    const Instance copied = parse_instance(instance_path("P-n16-k8")).with_rounded_distances();
    CHECK(copied.rounding() == DistanceRounding::nearest_integer);
    CHECK(copied.min_fleet() == parsed.min_fleet());
    for (int i = 0; i < parsed.n_nodes(); ++i)
      for (int j = 0; j < parsed.n_nodes(); ++j) CHECK(copied.d(i, j) == parsed.d(i, j));
  }

  TEST_CASE("load factor scales the route limit") {
    InstanceConfig cfg;
    cfg.load_factor = 1.05;
    const Instance inst = parse_instance(instance_path("P-n19-k2"), cfg);
    CHECK(inst.max_load() == doctest::Approx(1.05 * inst.capacity()));
    CHECK(inst.with_load_factor(1.5).max_load() == doctest::Approx(1.5 * inst.capacity()));
  }

  TEST_CASE("parse errors") {
    const auto no_capacity = write_temp("vrpsd_no_capacity.vrp",
                                        "NAME : x\nDIMENSION : 2\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n"
                                        "1 0 0\n2 3 4\nDEMAND_SECTION\n1 0\n2 5\nEOF\n");
    CHECK_THROWS_AS(parse_instance(no_capacity), InstanceError);
    const auto zero_demand = write_temp("vrpsd_zero_demand.vrp",
                                        "NAME : x\nDIMENSION : 3\nCAPACITY : 10\nEDGE_WEIGHT_TYPE : EUC_2D\n"
                                        "NODE_COORD_SECTION\n1 0 0\n2 3 4\n3 1 1\nDEMAND_SECTION\n1 0\n2 5\n3 0\nEOF\n");
    CHECK_THROWS_AS(parse_instance(zero_demand), InstanceError);
    const auto missing_demands = write_temp("vrpsd_missing_demands.vrp",
                                            "NAME : x\nDIMENSION : 2\nCAPACITY : 10\nEDGE_WEIGHT_TYPE : EUC_2D\n"
                                            "NODE_COORD_SECTION\n1 0 0\n2 3 4\nEOF\n");
    CHECK_THROWS_AS(parse_instance(missing_demands), InstanceError);
    CHECK_THROWS_AS(parse_instance("/nonexistent/file.vrp"), InstanceError);
  }

  TEST_CASE("explicit pmf sidecar") {
    const auto vrp = write_temp("vrpsd_pmf.vrp",
                                "NAME : x-k1\nDIMENSION : 3\nCAPACITY : 10\nEDGE_WEIGHT_TYPE : EUC_2D\n"
                                "NODE_COORD_SECTION\n1 0 0\n2 3 4\n3 6 8\nDEMAND_SECTION\n1 0\n2 5\n3 2\nEOF\n");
    const auto pmf = write_temp("vrpsd_pmf.pmf", "1: 2 0.25 4 0.75\n2: 1 0.5 3 0.5\n");
    InstanceConfig cfg;
    cfg.pmf_path = pmf;
    const Instance inst = parse_instance(vrp, cfg);
    CHECK(inst.mean_demand(1) == doctest::Approx(3.5));
    CHECK(inst.mean_demand(2) == doctest::Approx(2.0));
    CHECK(inst.demand(1).prob(3) == 0.0);
  }

  TEST_CASE("customer heavier than a vehicle is rejected") {
    CHECK_THROWS_AS(make_instance({{0, 0}, {1, 1}}, 5, {DiscreteDistribution::deterministic(9)}), InstanceError);
  }
}
