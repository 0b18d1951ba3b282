#pragma once

#include <span>
#include <vector>

#include "vrpsd/column.hpp"
#include "vrpsd/instance.hpp"

namespace vrpsd {

/// Rounded capacity cut: the arcs leaving S carry at least
/// ceil(sum of mean demands in S / fQ) units of flow.
struct Cut {
  std::vector<int> set;       // sorted customer indices
  std::vector<char> member;   // indexed by node, member[0] == 0
  int rhs = 0;

  bool contains(int node) const { return member[static_cast<std::size_t>(node)] != 0; }
};

/// Builds a cut over `set`; throws std::invalid_argument unless S is a
/// nonempty proper subset of the customers.
Cut make_cut(std::vector<int> set, const Instance& inst);

/// Number of arcs of `route` (depot arcs included) going from S to outside S.
int cut_coefficient(const Cut& cut, std::span<const int> route);

class CutPool {
 public:
  // Returns false when a cut over the same set is already pooled.
  bool add(Cut cut);
  bool contains(std::span<const int> sorted_set) const;

  std::size_t size() const { return cuts_.size(); }
  bool empty() const { return cuts_.empty(); }
  const Cut& operator[](std::size_t k) const { return cuts_[k]; }
  auto begin() const { return cuts_.begin(); }
  auto end() const { return cuts_.end(); }

 private:
  std::vector<Cut> cuts_;
};

/// Dense table of arc flows x_ij over nodes 0..N.
class ArcFlows {
 public:
  explicit ArcFlows(int n_nodes) : n_(n_nodes), x_(static_cast<std::size_t>(n_nodes) * n_nodes, 0.0) {}

  int n_nodes() const { return n_; }
  double operator()(int i, int j) const { return x_[static_cast<std::size_t>(i) * n_ + j]; }
  double& operator()(int i, int j) { return x_[static_cast<std::size_t>(i) * n_ + j]; }

 private:
  int n_;
  std::vector<double> x_;
};

/// x_ij = sum over columns of (arc count) * theta.
ArcFlows arc_flows(std::span<const Column> columns, std::span<const double> theta, int n_nodes);

/// rhs(S) minus the flow leaving S.
double cut_violation(const Cut& cut, const ArcFlows& x);

/// Heuristic separation: support-graph components, greedy growth and
/// complements. Returns at most `max_cuts` cuts violated by more than 1e-4,
/// most violated first, skipping sets already in `pool`.
std::vector<Cut> separate_rcc(const ArcFlows& x, const Instance& inst, int max_cuts = 4,
                              const CutPool* pool = nullptr);

}  // namespace vrpsd
