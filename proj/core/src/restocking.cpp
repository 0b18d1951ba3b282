#include "vrpsd/restocking.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace vrpsd {

ValueTable::ValueTable(int route_length, int capacity)
    : length_(route_length),
      capacity_(capacity),
      values_(static_cast<std::size_t>(route_length + 1) * static_cast<std::size_t>(capacity + 1), 0.0),
      decisions_(values_.size(), Decision::direct) {}

int ValueTable::preventive_restock_states() const {
  int count = 0;
  for (int i = 0; i < length_; ++i)
    for (int q = 0; q <= capacity_; ++q)
      if (decision(i, q) == Decision::replenish) ++count;
  return count;
}

namespace {

// Sum over demand k of next customer: [round_trip * trips(k, q) + nu(next, residual)] * p(k).
double arrival_expectation(const ValueTable& table, int next_position, const DiscreteDistribution& dist,
                           double round_trip, int q, int capacity) {
  double acc = 0.0;
  const auto probs = dist.probs();
  for (std::size_t t = 0; t < probs.size(); ++t) {
    const int k = dist.min_support() + static_cast<int>(t);
    const int n_trips = trips(k, q, capacity);
    const int residual = capacity * n_trips + q - k;
    acc += (round_trip * n_trips + table.value(next_position, residual)) * probs[t];
  }
  return acc;
}

ValueTable solve_dp(std::span<const int> route, const Instance& inst, RestockPolicy policy) {
  if (route.empty()) throw std::invalid_argument("route must visit at least one customer");
  const int len = static_cast<int>(route.size());
  const int cap = inst.capacity();
  ValueTable table(len, cap);
  auto node = [&](int position) { return position == 0 ? 0 : route[static_cast<std::size_t>(position - 1)]; };

  for (int q = 0; q <= cap; ++q) table.value(len, q) = inst.d(node(len), 0);

  for (int i = len - 1; i >= 0; --i) {
    const int here = node(i);
    const int next = node(i + 1);
    const auto& dist = inst.demand(next);
    const double round_trip = inst.d(next, 0) + inst.d(0, next);
    const double refill = inst.d(here, 0) + inst.d(0, next) +
                          arrival_expectation(table, i + 1, dist, round_trip, cap, cap);
    for (int q = 0; q <= cap; ++q) {
      const double direct = inst.d(here, next) + arrival_expectation(table, i + 1, dist, round_trip, q, cap);
      if (policy == RestockPolicy::optimal && refill < direct) {
        table.value(i, q) = refill;
        table.set_decision(i, q, Decision::replenish);
      } else {
        table.value(i, q) = direct;
        table.set_decision(i, q, Decision::direct);
      }
    }
  }
  return table;
}

}  // namespace

RouteEvaluation eval_optimal(std::span<const int> route, const Instance& inst) {
  RouteEvaluation out;
  out.table = solve_dp(route, inst, RestockPolicy::optimal);
  out.cost = out.table.value(0, inst.capacity());
  return out;
}

double eval_dtd(std::span<const int> route, const Instance& inst) {
  return solve_dp(route, inst, RestockPolicy::detour_to_depot).value(0, inst.capacity());
}

double eval_route(std::span<const int> route, const Instance& inst, RestockPolicy policy) {
  return policy == RestockPolicy::optimal ? eval_optimal(route, inst).cost : eval_dtd(route, inst);
}

SimulationResult simulate(std::span<const int> route, const ValueTable& table, const Instance& inst,
                          int n_reps, std::uint64_t seed) {
  if (n_reps < 2) throw std::invalid_argument("simulation needs at least two replications");
  const int len = static_cast<int>(route.size());
  if (table.route_length() != len || table.capacity() != inst.capacity()) {
    throw std::invalid_argument("value table does not belong to this route");
  }
  const int cap = inst.capacity();

  std::vector<std::discrete_distribution<int>> samplers;
  samplers.reserve(route.size());
  for (int c : route) {
    const auto p = inst.demand(c).probs();
    samplers.emplace_back(p.begin(), p.end());
  }

  std::mt19937_64 rng(seed);
  // Welford accumulation: constant costs give exactly zero variance.
  double mean = 0.0;
  double m2 = 0.0;
  for (int rep = 0; rep < n_reps; ++rep) {
    double cost = 0.0;
    int q = cap;
    int here = 0;
    for (int i = 0; i < len; ++i) {
      const int next = route[static_cast<std::size_t>(i)];
      if (table.decision(i, q) == Decision::replenish) {
        cost += inst.d(here, 0) + inst.d(0, next);
        q = cap;
      } else {
        cost += inst.d(here, next);
      }
      const int k = inst.demand(next).min_support() + samplers[static_cast<std::size_t>(i)](rng);
      const int n_trips = trips(k, q, cap);
      cost += n_trips * (inst.d(next, 0) + inst.d(0, next));
      q = cap * n_trips + q - k;
      here = next;
    }
    cost += inst.d(here, 0);
    const double delta = cost - mean;
    mean += delta / (rep + 1);
    m2 += delta * (cost - mean);
  }
  const double n = static_cast<double>(n_reps);
  return {mean, std::sqrt(m2 / (n - 1.0) / n)};
}

}  // namespace vrpsd
