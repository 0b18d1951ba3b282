#pragma once

#include <bitset>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vrpsd/cuts.hpp"
#include "vrpsd/instance.hpp"
#include "vrpsd/master.hpp"

namespace vrpsd {

inline constexpr int kMaxNodes = 256;
using NodeSet = std::bitset<kMaxNodes>;

/// Route cost model used by the pricer.
enum class CostModel : std::uint8_t {
  optimal_restocking,
  detour_to_depot,
  apriori,  // deterministic CVRP: cost is the travel distance
};

enum class PricingMode : std::uint8_t { heuristic, exact };

/// ng neighbourhoods: each customer plus its nearest neighbours.
class NgSets {
 public:
  NgSets(const Instance& inst, int size = 12);

  const NodeSet& operator[](int customer) const { return eta_[static_cast<std::size_t>(customer)]; }
  int size() const { return size_; }

 private:
  int size_;
  std::vector<NodeSet> eta_;
};

/// Arcs usable under the active branching decisions.
class ArcFilter {
 public:
  explicit ArcFilter(int n_nodes) : n_(n_nodes), allowed_(static_cast<std::size_t>(n_nodes) * n_nodes, 1) {}

  int n_nodes() const { return n_; }
  bool allowed(int i, int j) const { return allowed_[static_cast<std::size_t>(i) * n_ + j] != 0; }
  void forbid(int i, int j) { allowed_[static_cast<std::size_t>(i) * n_ + j] = 0; }
  // Keeps (i,j) as the only way out of customer i and into customer j.
  void force(int i, int j);
  bool route_allowed(std::span<const int> route) const;

 private:
  int n_;
  std::vector<char> allowed_;
};

/// Dual contribution of arc (i,j): -alpha_j minus beta_k for each cut S_k
/// that the arc leaves (i in S_k, j outside).
double gamma(int i, int j, const DualValues& duals, const CutPool& cuts);

/// Dense gamma table over nodes 0..N for one set of duals.
class GammaTable {
 public:
  GammaTable(const Instance& inst, const DualValues& duals, const CutPool& cuts);

  double operator()(int i, int j) const { return g_[static_cast<std::size_t>(i) * n_ + j]; }
  double delta() const { return delta_; }
  // Largest cut term an arc entering j can carry: max over i of sum beta_k [i in S_k, j not in S_k].
  double max_cut_term_into(int j) const { return cut_into_[static_cast<std::size_t>(j)]; }

 private:
  int n_;
  std::vector<double> g_;
  std::vector<double> cut_into_;
  double delta_;
};

/// Partial route grown backward from the depot. `pr` lists the customers in
/// travel order starting at `n`; the depot is implicit at the end.
struct Label {
  int n = 0;
  double rl = 0.0;
  double ap = 0.0;
  double gamma = 0.0;
  NodeSet ng;
  std::vector<double> nu;  // nu(q), q = 0..Q (a single entry in apriori mode)
  Route pr;
  double completed_cost = 0.0;  // expected cost of the route {0} + pr
};

Label make_root(int j, const Instance& inst, const GammaTable& g, CostModel model = CostModel::optimal_restocking);

/// Backward extension to customer i (adds arc (i, label.n)).
Label extend(const Label& label, int i, const Instance& inst, const GammaTable& g, const NgSets& ng,
             CostModel model = CostModel::optimal_restocking);

bool can_extend(const Label& label, int i, const Instance& inst);

/// Reduced cost of the route {0} + label.pr.
double reduced_cost(const Label& label, const Instance& inst, const GammaTable& g);

bool dominates(const Label& a, const Label& b);
bool dominates_heuristic(const Label& a, const Label& b);

struct CompletionBounds {
  int capacity_levels = 0;             // table width: floor(fQ) + 1
  bool rcsp_enabled = false;
  bool knapsack_enabled = false;
  std::vector<double> psi;             // psi[i * capacity_levels + c]
  std::vector<double> kappa;           // kappa[c]
  std::vector<double> cut_correction;  // per node, see GammaTable::max_cut_term_into

  double psi_at(int i, int c) const { return psi[static_cast<std::size_t>(i) * capacity_levels + c]; }
};

CompletionBounds precompute_bounds(const Instance& inst, const GammaTable& g);

/// Lower bound on the reduced cost of every completion of `label`
/// (including the empty one).
double completion_bound(const Label& label, const Instance& inst, const GammaTable& g, const CompletionBounds& b);

struct PricingOptions {
  PricingMode mode = PricingMode::exact;
  CostModel cost_model = CostModel::optimal_restocking;
  int max_columns = 20;
  double eps = 1e-6;
  bool use_dominance = true;
  bool use_bounds = true;
  // When positive, each customer is reached only from this many predecessors
  // (cheapest reduced arc cost first); the search is then heuristic.
  int arc_limit = 0;
  // Stop as soon as max_columns negative routes are known.
  bool stop_when_full = false;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct PricedRoute {
  Route route;
  double cost = 0.0;
  double reduced_cost = 0.0;
};

struct PricingResult {
  std::vector<PricedRoute> routes;  // most negative first
  // Smallest reduced cost among completed routes that survived the bound test.
  double best_reduced_cost = 0.0;
  bool complete = true;  // false after early stop or deadline
  long labels_created = 0;
  long labels_dominated = 0;
  long labels_bounded = 0;
  long dominance_checks = 0;
};

PricingResult price(const Instance& inst, const DualValues& duals, const CutPool& cuts, const NgSets& ng,
                    const ArcFilter& filter, const PricingOptions& options);

/// Expected cost of a fixed route under a pricing cost model.
double route_cost(std::span<const int> route, const Instance& inst, CostModel model);

}  // namespace vrpsd
