#include "vrpsd/column.hpp"

#include <algorithm>

namespace vrpsd {

std::uint64_t route_hash(std::span<const int> route) {
  std::uint64_t h = 14695981039346656037ULL;
  for (int c : route) {
    auto v = static_cast<std::uint32_t>(c);
    for (int b = 0; b < 4; ++b) {
      h ^= (v >> (8 * b)) & 0xFFU;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

int Column::visits(int customer) const {
  return static_cast<int>(std::count(route.begin(), route.end(), customer));
}

bool Column::elementary() const {
  Route sorted = route;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

std::vector<std::pair<int, int>> Column::arcs() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(route.size() + 1);
  int prev = 0;
  for (int c : route) {
    out.emplace_back(prev, c);
    prev = c;
  }
  out.emplace_back(prev, 0);
  return out;
}

int Column::arc_count(int from, int to) const {
  int count = 0;
  int prev = 0;
  for (std::size_t t = 0; t <= route.size(); ++t) {
    const int next = t < route.size() ? route[t] : 0;
    if (prev == from && next == to) ++count;
    prev = next;
  }
  return count;
}

Column make_column(Route route, double cost, const Instance& inst) {
  Column col;
  col.apriori = apriori_cost(route, inst);
  col.hash = route_hash(route);
  col.route = std::move(route);
  col.cost = cost;
  return col;
}

}  // namespace vrpsd
