#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "vrpsd/cuts.hpp"
#include "vrpsd/instance.hpp"
#include "vrpsd/master.hpp"
#include "vrpsd/pricing.hpp"
#include "vrpsd/restocking.hpp"

namespace vrpsd::testing {

std::filesystem::path data_dir();
std::filesystem::path instance_path(const std::string& name);

struct RandomSpec {
  int n = 6;
  int capacity = 10;
  double load_factor = 1.0;
  double lambda_lo = 1.0;
  double lambda_hi = 4.0;
  double grid = 100.0;
  // When positive, demands get random pmfs over at most this many values
  // instead of truncated Poisson.
  int small_support = 0;
};

Instance random_instance(std::mt19937_64& rng, const RandomSpec& spec);

/// Instance with explicit coordinates and pmfs (distances Euclidean).
Instance make_instance(const std::vector<Point>& coords, int capacity, std::vector<DiscreteDistribution> demands,
                       double load_factor = 1.0);

/// Every elementary route with load within fQ, in both orientations.
std::vector<Route> enumerate_routes(const Instance& inst);

/// Expected cost under the best history-dependent restocking policy, by
/// backward induction over the full tree of demand realizations. Trips are
/// counted by repeated refills rather than by a closed form.
double policy_tree_cost(std::span<const int> route, const Instance& inst);

struct PolicyMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Exact mean and variance of the cost of following `table` on `route`, with
/// each pmf renormalized to unit mass (the distribution simulate() samples).
PolicyMoments policy_moments(std::span<const int> route, const ValueTable& table, const Instance& inst);

/// Best value of an unbounded knapsack by exhaustive multiplicity search.
double knapsack_bruteforce(std::span<const double> values, std::span<const int> weights, int capacity);

/// Sum of gamma over the arcs of {0} + route + {0}, minus delta.
double dual_part(std::span<const int> route, const GammaTable& g);

/// Cheapest partition of all customers into the given routes (elementary,
/// with known costs); +inf when none exists. `fleet` fixes the route count.
double set_partition_optimum(const Instance& inst, const std::vector<Route>& routes, const std::vector<double>& costs,
                             std::optional<int> fleet = std::nullopt);

/// Random duals: alpha_i in [0, scale], beta_k in [0, scale / 4] for `cuts`.
DualValues random_duals(std::mt19937_64& rng, const Instance& inst, const CutPool& cuts, double scale,
                        double delta = 0.0);

/// Random nonempty proper customer subsets turned into cuts.
CutPool random_cuts(std::mt19937_64& rng, const Instance& inst, int count);

double elementary_min_reduced_cost(const Instance& inst, const std::vector<Route>& routes, const GammaTable& g,
                                   CostModel model);

}  // namespace vrpsd::testing
