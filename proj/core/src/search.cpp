#include "vrpsd/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vrpsd/restocking.hpp"

namespace vrpsd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kIntTol = 1e-6;
constexpr double kPruneTol = 1e-6;
constexpr double kMassTol = 1e-6;

using Clock = std::chrono::steady_clock;

}  // namespace

ArcFilter SearchNode::filter(int n_nodes) const {
  ArcFilter f(n_nodes);
  for (const auto& [i, j] : forbidden) f.forbid(i, j);
  for (const auto& [i, j] : forced) f.force(i, j);
  return f;
}

bool NodeQueue::Worse::operator()(const Entry& a, const Entry& b) const {
  if (a.node.lb != b.node.lb) return a.node.lb > b.node.lb;
  if (a.node.depth != b.node.depth) return a.node.depth < b.node.depth;
  return a.seq > b.seq;
}

void NodeQueue::push(SearchNode node) { heap_.push({std::move(node), seq_++}); }

SearchNode NodeQueue::pop() {
  if (heap_.empty()) throw std::logic_error("pop from an empty node queue");
  SearchNode n = heap_.top().node;
  heap_.pop();
  return n;
}

double NodeQueue::min_lb() const { return heap_.empty() ? kInf : heap_.top().node.lb; }

SearchNode select_node(NodeQueue& open) { return open.pop(); }

std::optional<BranchChoice> branch(const SearchNode& node, Master& master, int candidates) {
  const int n_nodes = static_cast<int>(master.duals().alpha.size());
  const ArcFlows x = master.arc_flows();
  std::vector<std::pair<double, std::pair<int, int>>> frac;
  for (int i = 0; i < n_nodes; ++i)
    for (int j = 0; j < n_nodes; ++j) {
      if (i == j) continue;
      const double v = x(i, j);
      if (v > kIntTol && v < 1.0 - kIntTol) frac.push_back({std::abs(v - 0.5), {i, j}});
    }
  if (frac.empty()) return std::nullopt;
  std::stable_sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  if (static_cast<int>(frac.size()) > candidates) frac.resize(static_cast<std::size_t>(candidates));

  const ArcFilter base = node.filter(n_nodes);
  auto child_bound = [&](const ArcFilter& f) {
    master.apply_penalties([&](const Column& c) { return !f.route_allowed(c.route); });
    if (master.solve() != lp::Status::optimal) return kInf;
    return master.objective();
  };

  std::optional<BranchChoice> best;
  for (const auto& [score, arc] : frac) {
    const auto [i, j] = arc;
    ArcFilter down = base;
    down.forbid(i, j);
    ArcFilter up = base;
    up.force(i, j);
    BranchChoice c{i, j, child_bound(up), child_bound(down)};
    const double lo = std::min(c.lb_up, c.lb_down);
    const double hi = std::max(c.lb_up, c.lb_down);
    if (!best) {
      best = c;
      continue;
    }
    const double blo = std::min(best->lb_up, best->lb_down);
    const double bhi = std::max(best->lb_up, best->lb_down);
    if (lo > blo + 1e-9 || (lo > blo - 1e-9 && hi > bhi + 1e-9)) best = c;
  }
  master.apply_penalties([&](const Column& c) { return !base.route_allowed(c.route); });
  master.solve();
  return best;
}

namespace {

class Search {
 public:
  Search(const Instance& inst, const SolveConfig& cfg)
      : inst_(inst),
        cfg_(cfg),
        start_(Clock::now()),
        deadline_(start_ + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(cfg.time_limit_s))),
        ng_(inst, cfg.ng_size),
        master_(inst, cfg.fleet, [&](std::span<const int> r) { return route_cost(r, inst, cfg.cost_model); }) {}

  SolveResult run() {
    NodeQueue open;
    SearchNode root;
    root.lb = -kInf;
    open.push(root);
    long next_id = 1;

    while (!open.empty()) {
      if (Clock::now() > deadline_) {
        result_.timed_out = true;
        break;
      }
      SearchNode node = select_node(open);
      if (incumbent_value() < kInf && node.lb >= incumbent_value() - kPruneTol) continue;

      const Outcome out = process(node);
      ++result_.stats.nodes;
      if (out.timed_out) {
        result_.timed_out = true;
        open.push(node);
        break;
      }
      if (node.id == 0) result_.stats.root_lb = out.lb;
      node.lb = std::max(node.lb, out.lb);
      emit(node, open, out);

      if (out.infeasible) continue;
      if (node.lb >= incumbent_value() - kPruneTol) continue;
      if (out.integral) {
        take_integral(heuristic_mode());
        continue;
      }
      auto choice = branch(node, master_, cfg_.branching_candidates);
      if (!choice) {
        take_from_arcs();
        continue;
      }
      SearchNode up = node;
      up.id = next_id++;
      up.depth = node.depth + 1;
      up.forced.emplace_back(choice->i, choice->j);
      SearchNode down = node;
      down.id = next_id++;
      down.depth = node.depth + 1;
      down.forbidden.emplace_back(choice->i, choice->j);
      open.push(std::move(up));
      open.push(std::move(down));
    }

    const double open_lb = open.min_lb();
    if (result_.timed_out) {
      result_.lower_bound = std::min(open_lb, incumbent_value());
    } else {
      result_.lower_bound = incumbent_value();
      result_.optimal = result_.incumbent.has_value() && !heuristic_mode();
      result_.infeasible = !result_.incumbent.has_value();
    }
    if (result_.incumbent) {
      const double inc = result_.incumbent->objective;
      result_.gap = inc > 0 ? std::max(0.0, (inc - result_.lower_bound) / inc) : 0.0;
    } else {
      result_.gap = kInf;
    }
    result_.stats.columns = static_cast<long>(master_.columns().size());
    result_.stats.cuts = static_cast<long>(master_.cuts().size());
    result_.stats.lp_iterations = master_.total_lp_iterations();
    result_.stats.seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    return std::move(result_);
  }

 private:
  struct Outcome {
    double lb = 0.0;
    bool integral = false;
    bool infeasible = false;
    bool timed_out = false;
    int columns_added = 0;
    int cuts_added = 0;
  };

  bool heuristic_mode() const { return cfg_.mode == SearchMode::heuristic; }

  // Pricing cascade: restricted-arc heuristic, heuristic dominance, then exact.
  std::vector<std::pair<PricingMode, int>> stages() const {
    std::vector<std::pair<PricingMode, int>> s;
    if (cfg_.heuristic_arc_limit > 0) s.emplace_back(PricingMode::heuristic, cfg_.heuristic_arc_limit);
    s.emplace_back(PricingMode::heuristic, 0);
    if (!heuristic_mode()) s.emplace_back(PricingMode::exact, 0);
    return s;
  }
  double incumbent_value() const { return result_.incumbent ? result_.incumbent->objective : kInf; }

  void emit(const SearchNode& node, const NodeQueue& open, const Outcome& out) {
    NodeLog rec;
    rec.node = node.id;
    rec.depth = node.depth;
    rec.lb = out.lb;
    rec.global_lb = std::min({open.min_lb(), node.lb, incumbent_value()});
    rec.incumbent = incumbent_value();
    rec.columns_added = out.columns_added;
    rec.cuts_added = out.cuts_added;
    result_.log.push_back(rec);
    if (cfg_.on_node) cfg_.on_node(rec);
  }

  int add_cuts(int& cuts_added) {
    if (master_.artificial_mass() > kMassTol || master_.penalized_mass() > kMassTol) return 0;
    auto cuts = separate_rcc(master_.arc_flows(), inst_, cfg_.max_cuts, &master_.cuts());
    for (const auto& c : cuts) master_.add_cut(c);
    cuts_added += static_cast<int>(cuts.size());
    return static_cast<int>(cuts.size());
  }

  // Prices with the given dominance mode; returns the number of new columns.
  int price_round(PricingMode mode, int arc_limit, const ArcFilter& filter, bool& complete) {
    PricingOptions opt;
    opt.mode = mode;
    opt.arc_limit = arc_limit;
    opt.cost_model = cfg_.cost_model;
    opt.max_columns = cfg_.max_columns;
    opt.deadline = deadline_;
    opt.stop_when_full = true;
    const auto res = price(inst_, master_.duals(), master_.cuts(), ng_, filter, opt);
    ++result_.stats.pricing_calls;
    if (mode == PricingMode::exact) ++result_.stats.exact_pricing_calls;
    result_.stats.labels += res.labels_created;
    complete = res.complete || static_cast<int>(res.routes.size()) >= cfg_.max_columns;
    std::vector<Column> cols;
    cols.reserve(res.routes.size());
    for (const auto& r : res.routes) cols.push_back(make_column(r.route, r.cost, inst_));
    return master_.add_columns(std::move(cols));
  }

  Outcome process(const SearchNode& node) {
    Outcome out;
    const ArcFilter filter = node.filter(inst_.n_nodes());
    master_.apply_penalties([&](const Column& c) { return !filter.route_allowed(c.route); });
    bool separating = cfg_.use_cuts;

    while (true) {
      if (Clock::now() > deadline_) {
        out.timed_out = true;
        return out;
      }
      if (master_.solve() != lp::Status::optimal) throw std::runtime_error("restricted master LP did not solve");

      if (separating) {
        if (add_cuts(out.cuts_added) > 0) continue;
        separating = false;
      }

      bool complete = true;
      int added = 0;
      for (const auto& [mode, limit] : stages()) {
        added = price_round(mode, limit, filter, complete);
        if (!complete) {
          out.timed_out = true;
          return out;
        }
        if (added > 0) break;
      }
      out.columns_added += added;
      if (added > 0) continue;

      if (cfg_.use_cuts && add_cuts(out.cuts_added) > 0) {
        separating = true;
        continue;
      }
      break;
    }

    if (!heuristic_mode()) master_.certify();
    out.lb = master_.objective();
    if (master_.artificial_mass() > kMassTol || master_.penalized_mass() > kMassTol) {
      out.infeasible = true;
      return out;
    }
    const auto& theta = master_.theta();
    out.integral = std::all_of(theta.begin(), theta.end(), [](double t) {
      return t <= kIntTol || t >= 1.0 - kIntTol;
    });
    if (out.integral) {
      for (std::size_t r = 0; r < theta.size(); ++r)
        if (theta[r] >= 1.0 - kIntTol && !master_.columns()[r].elementary()) out.integral = false;
    }
    return out;
  }

  void offer_incumbent(std::vector<Route> routes, bool heuristic) {
    Incumbent inc;
    inc.heuristic = heuristic;
    for (auto& r : routes) {
      const double c = route_cost(r, inst_, cfg_.cost_model);
      inc.costs.push_back(c);
      inc.objective += c;
      inc.routes.push_back(std::move(r));
    }
    if (inc.objective < incumbent_value() - 1e-9) result_.incumbent = std::move(inc);
  }

  void take_integral(bool heuristic) {
    std::vector<Route> routes;
    const auto& theta = master_.theta();
    for (std::size_t r = 0; r < theta.size(); ++r)
      if (theta[r] >= 1.0 - kIntTol) routes.push_back(master_.columns()[r].route);
    offer_incumbent(std::move(routes), heuristic);
  }

  // Integral arc flows with fractional columns: read the routes off the arcs.
  void take_from_arcs() {
    const ArcFlows x = master_.arc_flows();
    const int n = inst_.n_customers();
    std::vector<int> succ(static_cast<std::size_t>(n) + 1, -1);
    std::vector<int> starts;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) {
        if (i == j || x(i, j) < 0.5) continue;
        if (i == 0) {
          starts.push_back(j);
        } else {
          succ[static_cast<std::size_t>(i)] = j;
        }
      }
    std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
    std::vector<Route> routes;
    for (int s : starts) {
      Route r;
      for (int c = s; c != 0 && c > 0; c = succ[static_cast<std::size_t>(c)]) {
        if (seen[static_cast<std::size_t>(c)]) return;
        seen[static_cast<std::size_t>(c)] = 1;
        r.push_back(c);
      }
      if (!route_feasible(r, inst_)) return;
      routes.push_back(std::move(r));
    }
    for (int i = 1; i <= n; ++i)
      if (!seen[static_cast<std::size_t>(i)]) return;
    if (cfg_.fleet && static_cast<int>(routes.size()) != *cfg_.fleet) return;
    offer_incumbent(std::move(routes), heuristic_mode());
  }

  const Instance& inst_;
  SolveConfig cfg_;
  Clock::time_point start_;
  Clock::time_point deadline_;
  NgSets ng_;
  Master master_;
  SolveResult result_;
};

}  // namespace

SolveResult solve(const Instance& inst, const SolveConfig& config) {
  if (config.time_limit_s <= 0) throw std::invalid_argument("time limit must be positive");
  Search search(inst, config);
  return search.run();
}

VssResult compute_vss(const Instance& inst, SolveConfig config) {
  VssResult out;
  // The deterministic counterpart is the CVRP on integer distances.
  const Instance det_inst = inst.rounding() == DistanceRounding::nearest_integer ? inst : inst.with_rounded_distances();
  SolveConfig det_cfg = config;
  det_cfg.cost_model = CostModel::apriori;
  det_cfg.fleet.reset();
  const SolveResult det = solve(det_inst, det_cfg);
  SolveConfig sto_cfg = config;
  sto_cfg.cost_model = CostModel::optimal_restocking;
  sto_cfg.fleet.reset();
  const SolveResult sto = solve(inst, sto_cfg);
  if (!det.incumbent || !sto.incumbent) throw std::runtime_error("no solution found within the time limit");

  auto best_orientation = [&](const std::vector<Route>& routes) {
    double total = 0.0;
    for (const auto& r : routes) {
      const Route rev(r.rbegin(), r.rend());
      total += std::min(eval_optimal(r, inst).cost, eval_optimal(rev, inst).cost);
    }
    return total;
  };

  out.approximate = !det.optimal || !sto.optimal;
  out.det_obj = det.incumbent->objective;
  out.det_routes = det.incumbent->routes;
  out.stoch_routes = sto.incumbent->routes;
  out.stoch_obj = sto.incumbent->objective;
  out.det_eval_obj = best_orientation(out.det_routes);

  // Alternative deterministic optima: keep the one that evaluates best.
  double sto_det_cost = 0.0;
  for (const auto& r : out.stoch_routes) sto_det_cost += apriori_cost(r, det_inst);
  if (sto_det_cost <= out.det_obj + 1e-6) {
    const double alt = best_orientation(out.stoch_routes);
    if (alt < out.det_eval_obj) {
      out.det_eval_obj = alt;
      out.det_routes = out.stoch_routes;
    }
  }
  out.vss_pct = 100.0 * (out.det_eval_obj - out.stoch_obj) / out.det_eval_obj;
  return out;
}

PolicyComparison compare_policies(const Instance& inst, SolveConfig config) {
  PolicyComparison out;
  config.cost_model = CostModel::optimal_restocking;
  out.optimal = solve(inst, config);
  config.cost_model = CostModel::detour_to_depot;
  out.dtd = solve(inst, config);
  if (!out.optimal.incumbent || !out.dtd.incumbent) throw std::runtime_error("no solution found within the time limit");
  out.optimal_obj = out.optimal.incumbent->objective;
  out.dtd_obj = out.dtd.incumbent->objective;
  out.diff_pct = 100.0 * (out.dtd_obj - out.optimal_obj) / out.optimal_obj;
  out.approximate = !out.optimal.optimal || !out.dtd.optimal;
  return out;
}

}  // namespace vrpsd
