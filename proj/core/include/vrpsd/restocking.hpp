#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vrpsd/instance.hpp"

namespace vrpsd {

/// Replenishment trips needed to serve demand k with q units on board:
/// ceil((k - q) / Q), clamped below at zero.
inline int trips(int demand, int residual, int capacity) {
  if (demand <= residual) return 0;
  return (demand - residual + capacity - 1) / capacity;
}

enum class RestockPolicy : std::uint8_t {
  optimal,          // choose direct travel or preventive replenishment after every customer
  detour_to_depot,  // replenish only on stockout
};

enum class Decision : std::uint8_t { direct, replenish };

/// Expected remaining cost nu(i, q) after serving position i (0 = depot) with q units left,
/// plus the argmin decision for every non-terminal position.
class ValueTable {
 public:
  ValueTable() = default;
  ValueTable(int route_length, int capacity);

  int route_length() const { return length_; }
  int capacity() const { return capacity_; }

  double value(int position, int q) const { return values_[index(position, q)]; }
  double& value(int position, int q) { return values_[index(position, q)]; }
  Decision decision(int position, int q) const { return decisions_[index(position, q)]; }
  void set_decision(int position, int q, Decision d) { decisions_[index(position, q)] = d; }

  // Number of (position, q) states, position < length, where replenishing is optimal.
  int preventive_restock_states() const;

 private:
  std::size_t index(int position, int q) const {
    return static_cast<std::size_t>(position) * static_cast<std::size_t>(capacity_ + 1) +
           static_cast<std::size_t>(q);
  }

  int length_ = 0;
  int capacity_ = 0;
  std::vector<double> values_;
  std::vector<Decision> decisions_;
};

struct RouteEvaluation {
  double cost = 0.0;
  ValueTable table;
};

/// Expected cost of an a priori route under optimal restocking.
RouteEvaluation eval_optimal(std::span<const int> route, const Instance& inst);

/// Expected cost of an a priori route under the detour-to-depot policy.
double eval_dtd(std::span<const int> route, const Instance& inst);

/// Dispatches on policy; the restocking share of the cost is cost - apriori_cost.
double eval_route(std::span<const int> route, const Instance& inst, RestockPolicy policy);

struct SimulationResult {
  double mean = 0.0;
  double std_err = 0.0;
};

/// Monte Carlo execution of `route` following the decisions stored in `table`.
/// Demands are sampled from each pmf renormalized to unit mass.
SimulationResult simulate(std::span<const int> route, const ValueTable& table, const Instance& inst,
                          int n_reps, std::uint64_t seed);

}  // namespace vrpsd
