#include "support.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "vrpsd/restocking.hpp"

#ifndef VRPSD_TEST_DATA_DIR
#define VRPSD_TEST_DATA_DIR "data"
#endif

namespace vrpsd::testing {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> euclid(const std::vector<Point>& c) {
  const std::size_t n = c.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::hypot(c[i].x - c[j].x, c[i].y - c[j].y);
  return d;
}

}  // namespace

std::filesystem::path data_dir() { return VRPSD_TEST_DATA_DIR; }

std::filesystem::path instance_path(const std::string& name) { return data_dir() / "instances" / (name + ".vrp"); }

Instance make_instance(const std::vector<Point>& coords, int capacity, std::vector<DiscreteDistribution> demands,
                       double load_factor) {
  return Instance("toy", coords, euclid(coords), capacity, load_factor, std::move(demands));
}

Instance random_instance(std::mt19937_64& rng, const RandomSpec& spec) {
  std::uniform_real_distribution<double> xy(0.0, spec.grid);
  std::uniform_real_distribution<double> lam(spec.lambda_lo, spec.lambda_hi);
  std::vector<Point> coords;
  for (int i = 0; i <= spec.n; ++i) coords.push_back({xy(rng), xy(rng)});
  std::vector<DiscreteDistribution> demands;
  for (int i = 1; i <= spec.n; ++i) {
    if (spec.small_support > 0) {
      std::uniform_int_distribution<int> len(1, spec.small_support);
      std::uniform_real_distribution<double> w(0.05, 1.0);
      const int l = len(rng);
      // Keep the largest value within fQ so every customer fits on a route.
      const int top = static_cast<int>(std::floor(spec.load_factor * spec.capacity)) - l + 1;
      std::uniform_int_distribution<int> start(1, std::max(1, top));
      std::vector<double> p(static_cast<std::size_t>(l));
      for (auto& v : p) v = w(rng);
      const double s = std::accumulate(p.begin(), p.end(), 0.0);
      for (auto& v : p) v /= s;
      demands.emplace_back(start(rng), std::move(p));
    } else {
      demands.push_back(truncate_poisson(lam(rng)));
    }
  }
  return Instance("random", coords, euclid(coords), spec.capacity, spec.load_factor, std::move(demands));
}

std::vector<Route> enumerate_routes(const Instance& inst) {
  const int n = inst.n_customers();
  std::vector<Route> out;
  Route cur;
  std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
  std::function<void(double)> grow = [&](double load) {
    if (!cur.empty()) out.push_back(cur);
    for (int i = 1; i <= n; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      const double next = load + inst.mean_demand(i);
      if (next > inst.max_load() + 1e-9) continue;
      used[static_cast<std::size_t>(i)] = 1;
      cur.push_back(i);
      grow(next);
      cur.pop_back();
      used[static_cast<std::size_t>(i)] = 0;
    }
  };
  grow(0.0);
  return out;
}

double policy_tree_cost(std::span<const int> route, const Instance& inst) {
  const int cap = inst.capacity();
  const int l = static_cast<int>(route.size());
  // Serve `k` units at customer c holding q: refill until the demand is met.
  const auto serve = [&](int c, int q, int k, double& cost) {
    while (k > q) {
      k -= q;
      q = cap;
      cost += inst.d(c, 0) + inst.d(0, c);
    }
    return q - k;
  };
  // Expected cost from standing at position `pos` (after service) with q on board.
  std::function<double(int, int)> from = [&](int pos, int q) -> double {
    const int here = route[static_cast<std::size_t>(pos)];
    if (pos + 1 == l) return inst.d(here, 0);
    const int next = route[static_cast<std::size_t>(pos) + 1];
    const auto& dist = inst.demand(next);
    // Travel is paid whatever the demand; only the refills depend on it.
    const auto expect = [&](int start_q, double travel) {
      double acc = travel;
      for (int k = dist.min_support(); k <= dist.max_support(); ++k) {
        double c = 0.0;
        const int left = serve(next, start_q, k, c);
        acc += dist.prob(k) * (c + from(pos + 1, left));
      }
      return acc;
    };
    const double direct = expect(q, inst.d(here, next));
    const double refill = expect(cap, inst.d(here, 0) + inst.d(0, next));
    return std::min(direct, refill);
  };
  const int first = route.front();
  const auto& dist = inst.demand(first);
  double acc = inst.d(0, first);
  for (int k = dist.min_support(); k <= dist.max_support(); ++k) {
    double c = 0.0;
    const int left = serve(first, cap, k, c);
    acc += dist.prob(k) * (c + from(0, left));
  }
  return acc;
}

PolicyMoments policy_moments(std::span<const int> route, const ValueTable& table, const Instance& inst) {
  const int cap = inst.capacity();
  const int l = static_cast<int>(route.size());
  const auto at = [&](int i, int q) { return static_cast<std::size_t>(i) * static_cast<std::size_t>(cap + 1) + q; };
  // First and second moments of the remaining cost from (position, q).
  std::vector<double> m1(at(l + 1, 0), 0.0), m2(at(l + 1, 0), 0.0);
  const int last = route.back();
  for (int q = 0; q <= cap; ++q) {
    m1[at(l, q)] = inst.d(last, 0);
    m2[at(l, q)] = inst.d(last, 0) * inst.d(last, 0);
  }
  for (int i = l - 1; i >= 0; --i) {
    const int here = i == 0 ? 0 : route[static_cast<std::size_t>(i) - 1];
    const int next = route[static_cast<std::size_t>(i)];
    const auto& dist = inst.demand(next);
    const double round_trip = inst.d(next, 0) + inst.d(0, next);
    for (int q = 0; q <= cap; ++q) {
      const bool refill = table.decision(i, q) == Decision::replenish;
      const double travel = refill ? inst.d(here, 0) + inst.d(0, next) : inst.d(here, next);
      const int start = refill ? cap : q;
      double a = 0.0, b = 0.0;
      for (int k = dist.min_support(); k <= dist.max_support(); ++k) {
        const double p = dist.prob(k) / dist.mass();
        const int n_trips = trips(k, start, cap);
        const double c = travel + n_trips * round_trip;
        const std::size_t to = at(i + 1, cap * n_trips + start - k);
        a += p * (c + m1[to]);
        b += p * (c * c + 2.0 * c * m1[to] + m2[to]);
      }
      m1[at(i, q)] = a;
      m2[at(i, q)] = b;
    }
  }
  const double mean = m1[at(0, cap)];
  return {mean, std::max(0.0, m2[at(0, cap)] - mean * mean)};
}

double knapsack_bruteforce(std::span<const double> values, std::span<const int> weights, int capacity) {
  double best = 0.0;
  std::function<void(std::size_t, int, double)> go = [&](std::size_t item, int room, double value) {
    best = std::max(best, value);
    if (item == values.size()) return;
    for (int m = 0; m * weights[item] <= room; ++m) {
      go(item + 1, room - m * weights[item], value + m * values[item]);
      if (weights[item] == 0) break;
    }
  };
  go(0, capacity, 0.0);
  return best;
}

double dual_part(std::span<const int> route, const GammaTable& g) {
  double s = 0.0;
  int prev = 0;
  for (int c : route) {
    s += g(prev, c);
    prev = c;
  }
  return s + g(prev, 0) - g.delta();
}

double set_partition_optimum(const Instance& inst, const std::vector<Route>& routes, const std::vector<double>& costs,
                             std::optional<int> fleet) {
  const int n = inst.n_customers();
  const std::size_t full = (std::size_t{1} << n) - 1;
  const int max_k = fleet ? *fleet : n;
  // best[k][mask]: cheapest cover of mask with exactly k routes.
  std::vector<std::vector<double>> best(static_cast<std::size_t>(max_k) + 1, std::vector<double>(full + 1, kInf));
  std::vector<std::vector<std::pair<std::size_t, double>>> by_low(static_cast<std::size_t>(n));
  for (std::size_t r = 0; r < routes.size(); ++r) {
    std::size_t m = 0;
    for (int c : routes[r]) m |= std::size_t{1} << (c - 1);
    const int low = std::countr_zero(m);
    by_low[static_cast<std::size_t>(low)].emplace_back(m, costs[r]);
  }
  best[0][0] = 0.0;
  for (int k = 1; k <= max_k; ++k) {
    for (std::size_t mask = 1; mask <= full; ++mask) {
      const int low = std::countr_zero(mask);
      double b = kInf;
      for (const auto& [m, c] : by_low[static_cast<std::size_t>(low)]) {
        if ((m & mask) != m) continue;
        const double prev = best[static_cast<std::size_t>(k) - 1][mask & ~m];
        if (prev < kInf) b = std::min(b, prev + c);
      }
      best[static_cast<std::size_t>(k)][mask] = b;
    }
  }
  if (fleet) return best[static_cast<std::size_t>(*fleet)][full];
  double b = kInf;
  for (int k = 1; k <= max_k; ++k) b = std::min(b, best[static_cast<std::size_t>(k)][full]);
  return b;
}

DualValues random_duals(std::mt19937_64& rng, const Instance& inst, const CutPool& cuts, double scale, double delta) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DualValues d;
  d.alpha.assign(static_cast<std::size_t>(inst.n_nodes()), 0.0);
  for (int i = 1; i <= inst.n_customers(); ++i) d.alpha[static_cast<std::size_t>(i)] = scale * u(rng);
  for (std::size_t k = 0; k < cuts.size(); ++k) d.beta.push_back(0.25 * scale * u(rng));
  d.delta = delta;
  return d;
}

CutPool random_cuts(std::mt19937_64& rng, const Instance& inst, int count) {
  CutPool pool;
  const int n = inst.n_customers();
  if (n < 2) return pool;
  std::bernoulli_distribution coin(0.4);
  for (int t = 0; t < count * 4 && static_cast<int>(pool.size()) < count; ++t) {
    std::vector<int> s;
    for (int i = 1; i <= n; ++i)
      if (coin(rng)) s.push_back(i);
    if (s.empty() || static_cast<int>(s.size()) == n) continue;
    pool.add(make_cut(s, inst));
  }
  return pool;
}

double elementary_min_reduced_cost(const Instance& inst, const std::vector<Route>& routes, const GammaTable& g,
                                   CostModel model) {
  double best = kInf;
  for (const auto& r : routes) best = std::min(best, route_cost(r, inst, model) + dual_part(r, g));
  return best;
}

}  // namespace vrpsd::testing
