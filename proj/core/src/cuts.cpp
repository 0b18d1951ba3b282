#include "vrpsd/cuts.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace vrpsd {

namespace {

constexpr double kViolationTol = 1e-4;
constexpr double kSupportTol = 1e-6;

int rounded_rhs(double load, double max_load) {
  return static_cast<int>(std::ceil(load / max_load - 1e-9));
}

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int v) {
    while (parent_[static_cast<std::size_t>(v)] != v) {
      parent_[static_cast<std::size_t>(v)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(v)])];
      v = parent_[static_cast<std::size_t>(v)];
    }
    return v;
  }
  void unite(int a, int b) { parent_[static_cast<std::size_t>(find(a))] = find(b); }

 private:
  std::vector<int> parent_;
};

struct Candidate {
  std::vector<int> set;
  double violation = 0.0;
};

class Separator {
 public:
  Separator(const ArcFlows& x, const Instance& inst)
      : x_(x),
        inst_(inst),
        n_(inst.n_customers()),
        out_total_(static_cast<std::size_t>(n_) + 1, 0.0),
        cust_in_total_(static_cast<std::size_t>(n_) + 1, 0.0) {
    for (int v = 1; v <= n_; ++v) {
      total_load_ += inst.mean_demand(v);
      to_depot_total_ += x(v, 0);
      for (int u = 0; u <= n_; ++u) out_total_[static_cast<std::size_t>(v)] += x(v, u);
      for (int u = 1; u <= n_; ++u) cust_in_total_[static_cast<std::size_t>(v)] += x(u, v);
    }
  }

  double violation_of(const std::vector<char>& in) const {
    double load = 0.0;
    double out = 0.0;
    int size = 0;
    for (int i = 1; i <= n_; ++i) {
      if (!in[static_cast<std::size_t>(i)]) continue;
      ++size;
      load += inst_.mean_demand(i);
      for (int j = 0; j <= n_; ++j)
        if (!in[static_cast<std::size_t>(j)]) out += x_(i, j);
    }
    if (size == 0 || size == n_) return -1.0;
    return rounded_rhs(load, inst_.max_load()) - out;
  }

  void consider(const std::vector<char>& in) {
    const double v = violation_of(in);
    if (v > kViolationTol) record(in, v, false);
  }

  // Greedy growth from a single customer: repeatedly add the adjacent
  // customer giving the largest violation, checking every intermediate set
  // and its complement. Crossing flows are maintained incrementally.
  void grow(int seed) {
    std::vector<char> in(static_cast<std::size_t>(n_) + 1, 0);
    std::vector<double> from_set(static_cast<std::size_t>(n_) + 1, 0.0);  // sum_{i in S} x_iv
    std::vector<double> into_set(static_cast<std::size_t>(n_) + 1, 0.0);  // sum_{j in S} x_vj
    double load = 0.0;
    double out = 0.0;       // flow S -> outside (depot included)
    double cust_in = 0.0;   // flow customers outside S -> S
    double depot_out = 0.0; // flow S -> depot
    int size = 0;

    auto add = [&](int v) {
      out += out_total_[static_cast<std::size_t>(v)] - from_set[static_cast<std::size_t>(v)] - into_set[static_cast<std::size_t>(v)];
      cust_in += cust_in_total_[static_cast<std::size_t>(v)] - from_set[static_cast<std::size_t>(v)] - into_set[static_cast<std::size_t>(v)];
      depot_out += x_(v, 0);
      load += inst_.mean_demand(v);
      in[static_cast<std::size_t>(v)] = 1;
      ++size;
      for (int u = 1; u <= n_; ++u) {
        from_set[static_cast<std::size_t>(u)] += x_(v, u);
        into_set[static_cast<std::size_t>(u)] += x_(u, v);
      }
    };

    add(seed);
    while (size < n_) {
      const double v_set = rounded_rhs(load, inst_.max_load()) - out;
      if (v_set > kViolationTol) record(in, v_set, false);
      const double comp_out = (to_depot_total_ - depot_out) + cust_in;
      const double v_comp = rounded_rhs(total_load_ - load, inst_.max_load()) - comp_out;
      if (v_comp > kViolationTol) record(in, v_comp, true);

      int best = -1;
      double best_v = -1e300;
      for (int v = 1; v <= n_; ++v) {
        if (in[static_cast<std::size_t>(v)]) continue;
        const double link = from_set[static_cast<std::size_t>(v)] + into_set[static_cast<std::size_t>(v)];
        if (link <= kSupportTol) continue;
        const double score = rounded_rhs(load + inst_.mean_demand(v), inst_.max_load()) -
                             (out + out_total_[static_cast<std::size_t>(v)] - link);
        if (score > best_v) {
          best_v = score;
          best = v;
        }
      }
      if (best < 0 || size + 1 >= n_) break;
      add(best);
    }
  }

  void record(const std::vector<char>& in, double violation, bool complemented) {
    std::vector<int> set;
    for (int i = 1; i <= n_; ++i)
      if ((in[static_cast<std::size_t>(i)] != 0) != complemented) set.push_back(i);
    if (set.empty() || static_cast<int>(set.size()) >= n_) return;
    if (seen_.insert(set).second) found_.push_back({std::move(set), violation});
  }

  std::vector<char> complement(const std::vector<char>& in) const {
    std::vector<char> out(in.size(), 0);
    for (int i = 1; i <= n_; ++i) out[static_cast<std::size_t>(i)] = in[static_cast<std::size_t>(i)] ? 0 : 1;
    return out;
  }

  std::vector<Candidate>& found() { return found_; }

 private:
  const ArcFlows& x_;
  const Instance& inst_;
  int n_;
  std::vector<double> out_total_;
  std::vector<double> cust_in_total_;
  double total_load_ = 0.0;
  double to_depot_total_ = 0.0;
  std::set<std::vector<int>> seen_;
  std::vector<Candidate> found_;
};

}  // namespace

Cut make_cut(std::vector<int> set, const Instance& inst) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  const int n = inst.n_customers();
  if (set.empty() || static_cast<int>(set.size()) >= n) throw std::invalid_argument("cut set must be a nonempty proper subset");
  if (set.front() < 1 || set.back() > n) throw std::invalid_argument("cut set contains a non-customer node");
  Cut cut;
  cut.member.assign(static_cast<std::size_t>(n) + 1, 0);
  double load = 0.0;
  for (int i : set) {
    cut.member[static_cast<std::size_t>(i)] = 1;
    load += inst.mean_demand(i);
  }
  cut.rhs = rounded_rhs(load, inst.max_load());
  cut.set = std::move(set);
  return cut;
}

int cut_coefficient(const Cut& cut, std::span<const int> route) {
  int count = 0;
  for (std::size_t t = 0; t < route.size(); ++t) {
    const int next = t + 1 < route.size() ? route[t + 1] : 0;
    if (cut.contains(route[t]) && !cut.contains(next)) ++count;
  }
  return count;
}

bool CutPool::add(Cut cut) {
  if (contains(cut.set)) return false;
  cuts_.push_back(std::move(cut));
  return true;
}

bool CutPool::contains(std::span<const int> sorted_set) const {
  return std::any_of(cuts_.begin(), cuts_.end(), [&](const Cut& c) {
    return std::equal(c.set.begin(), c.set.end(), sorted_set.begin(), sorted_set.end());
  });
}

ArcFlows arc_flows(std::span<const Column> columns, std::span<const double> theta, int n_nodes) {
  ArcFlows x(n_nodes);
  for (std::size_t r = 0; r < columns.size(); ++r) {
    const double t = theta[r];
    if (t <= 0.0) continue;
    int prev = 0;
    for (int c : columns[r].route) {
      x(prev, c) += t;
      prev = c;
    }
    x(prev, 0) += t;
  }
  return x;
}

double cut_violation(const Cut& cut, const ArcFlows& x) {
  double out = 0.0;
  for (int i : cut.set)
    for (int j = 0; j < x.n_nodes(); ++j)
      if (!cut.contains(j)) out += x(i, j);
  return cut.rhs - out;
}

std::vector<Cut> separate_rcc(const ArcFlows& x, const Instance& inst, int max_cuts, const CutPool* pool) {
  const int n = inst.n_customers();
  if (n < 2 || max_cuts <= 0) return {};
  Separator sep(x, inst);

  UnionFind uf(n + 1);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (x(i, j) + x(j, i) > kSupportTol) uf.unite(i, j);

  std::vector<std::vector<char>> components;
  {
    std::vector<int> root_slot(static_cast<std::size_t>(n) + 1, -1);
    for (int i = 1; i <= n; ++i) {
      const int r = uf.find(i);
      if (root_slot[static_cast<std::size_t>(r)] < 0) {
        root_slot[static_cast<std::size_t>(r)] = static_cast<int>(components.size());
        components.emplace_back(static_cast<std::size_t>(n) + 1, 0);
      }
      components[static_cast<std::size_t>(root_slot[static_cast<std::size_t>(r)])][static_cast<std::size_t>(i)] = 1;
    }
  }
  for (const auto& comp : components) {
    sep.consider(comp);
    sep.consider(sep.complement(comp));
  }
  for (int i = 1; i <= n; ++i) sep.grow(i);

  auto& found = sep.found();
  std::stable_sort(found.begin(), found.end(),
                   [](const Candidate& a, const Candidate& b) { return a.violation > b.violation; });
  std::vector<Cut> out;
  for (auto& cand : found) {
    if (static_cast<int>(out.size()) >= max_cuts) break;
    if (pool != nullptr && pool->contains(cand.set)) continue;
    out.push_back(make_cut(std::move(cand.set), inst));
  }
  return out;
}

}  // namespace vrpsd
