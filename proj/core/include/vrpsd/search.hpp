#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "vrpsd/instance.hpp"
#include "vrpsd/master.hpp"
#include "vrpsd/pricing.hpp"

namespace vrpsd {

enum class SearchMode : std::uint8_t {
  exact,
  heuristic,  // heuristic dominance everywhere; the reported bound is advisory
};

/// Per-node record of the run log.
struct NodeLog {
  long node = 0;
  int depth = 0;
  double lb = 0.0;         // node bound after column generation
  double global_lb = 0.0;  // best bound over all open nodes
  double incumbent = 0.0;  // +inf while none is known
  int columns_added = 0;
  int cuts_added = 0;
};

struct SolveConfig {
  std::optional<int> fleet;
  SearchMode mode = SearchMode::exact;
  CostModel cost_model = CostModel::optimal_restocking;
  double time_limit_s = 3600.0;
  int ng_size = 12;
  int max_columns = 20;
  int max_cuts = 4;
  int branching_candidates = 10;
  bool use_cuts = true;
  // Predecessors per customer in the first, restricted pricing stage (0 skips it).
  int heuristic_arc_limit = 6;
  std::function<void(const NodeLog&)> on_node;
};

struct SearchNode {
  long id = 0;
  int depth = 0;
  double lb = 0.0;
  std::vector<std::pair<int, int>> forced;
  std::vector<std::pair<int, int>> forbidden;

  ArcFilter filter(int n_nodes) const;
};

/// Open nodes ordered by bound; ties go to the deeper node, then to the
/// earlier insertion.
class NodeQueue {
 public:
  void push(SearchNode node);
  SearchNode pop();
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  double min_lb() const;

 private:
  struct Entry {
    SearchNode node;
    long seq = 0;
  };
  struct Worse {
    bool operator()(const Entry& a, const Entry& b) const;
  };
  std::priority_queue<Entry, std::vector<Entry>, Worse> heap_;
  long seq_ = 0;
};

SearchNode select_node(NodeQueue& open);

struct Incumbent {
  std::vector<Route> routes;
  std::vector<double> costs;
  double objective = 0.0;
  bool heuristic = false;  // found with heuristic dominance only
};

struct BranchChoice {
  int i = 0;
  int j = 0;
  double lb_up = 0.0;
  double lb_down = 0.0;
};

/// Strong branching over the columns pooled in `master`, whose costs must
/// reflect `node`. Evaluates up to `candidates` fractional arcs (closest to
/// 0.5 first) with two penalized LPs each and picks the arc maximizing the
/// smaller child bound, ties by the larger. Restores the node's costs.
/// Returns nullopt when no arc is fractional.
std::optional<BranchChoice> branch(const SearchNode& node, Master& master, int candidates = 10);

struct SearchStats {
  long nodes = 0;
  long columns = 0;
  long cuts = 0;
  long pricing_calls = 0;
  long exact_pricing_calls = 0;
  long labels = 0;
  long lp_iterations = 0;
  double root_lb = 0.0;
  double seconds = 0.0;
};

struct SolveResult {
  std::optional<Incumbent> incumbent;
  double lower_bound = 0.0;
  double gap = 0.0;  // (incumbent - lower_bound) / incumbent; +inf without incumbent
  bool optimal = false;
  bool timed_out = false;
  bool infeasible = false;
  SearchStats stats;
  std::vector<NodeLog> log;
};

SolveResult solve(const Instance& inst, const SolveConfig& config);

struct VssResult {
  double vss_pct = 0.0;
  double stoch_obj = 0.0;
  double det_eval_obj = 0.0;
  double det_obj = 0.0;  // CVRP optimum on integer distances
  bool approximate = false;
  std::vector<Route> det_routes;
  std::vector<Route> stoch_routes;
};

/// Value of the stochastic solution. The deterministic CVRP is solved on
/// integer-rounded distances; its routes are evaluated in both orientations
/// under optimal restocking. When the stochastic solution is itself
/// CVRP-optimal, the better-evaluating of the two optima is used.
VssResult compute_vss(const Instance& inst, SolveConfig config);

struct PolicyComparison {
  double optimal_obj = 0.0;
  double dtd_obj = 0.0;
  double diff_pct = 0.0;  // 100 (dtd - optimal) / optimal
  bool approximate = false;
  SolveResult optimal;
  SolveResult dtd;
};

PolicyComparison compare_policies(const Instance& inst, SolveConfig config);

}  // namespace vrpsd
