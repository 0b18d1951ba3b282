#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "vrpsd/instance.hpp"

namespace vrpsd {

/// Orientation-sensitive FNV-1a hash of a customer sequence.
std::uint64_t route_hash(std::span<const int> route);

/// A route of the set-partitioning master. Routes may revisit a customer
/// (ng-routes), so visit and arc counts are multiplicities.
struct Column {
  Route route;
  double cost = 0.0;     // expected cost under the active cost model
  double apriori = 0.0;  // deterministic travel distance
  std::uint64_t hash = 0;

  int visits(int customer) const;
  bool elementary() const;
  // Arc multiset including the two depot arcs, in travel order.
  std::vector<std::pair<int, int>> arcs() const;
  int arc_count(int from, int to) const;
};

Column make_column(Route route, double cost, const Instance& inst);

}  // namespace vrpsd
