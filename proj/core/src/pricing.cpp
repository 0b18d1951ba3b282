#include "vrpsd/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "vrpsd/restocking.hpp"

namespace vrpsd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDomTol = 1e-9;
constexpr double kLoadTol = 1e-9;

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

int nu_width(const Instance& inst, CostModel model) {
  return model == CostModel::apriori ? 1 : inst.capacity() + 1;
}

// Expected cost from arriving at customer n with q units on board, given the
// value table `nu` of the position right after n.
double arrival_term(std::span<const double> nu, const DiscreteDistribution& dist, double round_trip, int q,
                    int cap) {
  const double* p = dist.probs().data();
  const int lo = dist.min_support();
  const int hi = dist.max_support();
  double acc = 0.0;
  // Demands needing the same number of trips form contiguous runs.
  int k = lo;
  int n_trips = trips(k, q, cap);
  while (k <= hi) {
    const int seg_end = std::min(hi, q + n_trips * cap);
    const int base = cap * n_trips + q;
    double mass = 0.0;
    for (; k <= seg_end; ++k) {
      const double pk = p[k - lo];
      acc += nu[idx(base - k)] * pk;
      mass += pk;
    }
    acc += round_trip * n_trips * mass;
    ++n_trips;
  }
  return acc;
}

// One backward dynamic-programming step: values of the position at customer i
// from the values `in` of the position at customer n (route i -> n -> ...).
void step_values(std::span<const double> in, int n, int i, const Instance& inst, CostModel model,
                 std::span<double> out) {
  if (model == CostModel::apriori) {
    out[0] = inst.d(i, n) + in[0];
    return;
  }
  const int cap = inst.capacity();
  const auto& dist = inst.demand(n);
  const double rt = inst.d(n, 0) + inst.d(0, n);
  const double arrive_full = arrival_term(in, dist, rt, cap, cap);
  const double refill = inst.d(i, 0) + inst.d(0, n) + arrive_full;
  const double dinn = inst.d(i, n);
  for (int q = 0; q <= cap; ++q) {
    const double direct = dinn + (q == cap ? arrive_full : arrival_term(in, dist, rt, q, cap));
    out[idx(q)] = (model == CostModel::optimal_restocking && refill < direct) ? refill : direct;
  }
}

double completion_from(std::span<const double> nu, int n, const Instance& inst, CostModel model) {
  if (model == CostModel::apriori) return inst.d(0, n) + nu[0];
  const int cap = inst.capacity();
  return inst.d(0, n) + arrival_term(nu, inst.demand(n), inst.d(n, 0) + inst.d(0, n), cap, cap);
}

struct View {
  double rl;
  const NodeSet* ng;
  double gamma;
  std::span<const double> nu;
  double completed;
};

bool dominates_view(const View& a, const View& b) {
  if (a.rl < b.rl - kDomTol || a.gamma > b.gamma + kDomTol) return false;
  if ((*a.ng & ~*b.ng).any()) return false;
  const std::size_t w = a.nu.size();
  if (a.nu[0] > b.nu[0] + kDomTol || a.nu[w - 1] > b.nu[w - 1] + kDomTol) return false;
  for (std::size_t q = 1; q + 1 < w; ++q)
    if (a.nu[q] > b.nu[q] + kDomTol) return false;
  return true;
}

bool dominates_heuristic_view(const View& a, const View& b) {
  if (a.rl < b.rl - kDomTol || a.gamma > b.gamma + kDomTol) return false;
  if ((*a.ng & ~*b.ng).any()) return false;
  return a.completed <= b.completed + kDomTol;
}

double rcsp_bound(int n, double rl, double ap, double gam, const Instance& inst, const GammaTable& g,
                  const CompletionBounds& b) {
  if (!b.rcsp_enabled) return -kInf;
  const int c = std::min(b.capacity_levels - 1, static_cast<int>(std::floor(rl + inst.mean_demand(n) + kLoadTol)));
  return c >= 0 ? b.psi_at(n, c) + ap + gam - g.delta() : -kInf;
}

double knapsack_bound(int n, double rl, double phi, const CompletionBounds& b) {
  if (!b.knapsack_enabled) return -kInf;
  const int c = std::clamp(static_cast<int>(std::floor(rl + kLoadTol)), 0, b.capacity_levels - 1);
  return phi - b.kappa[idx(c)] - b.cut_correction[idx(n)];
}

}  // namespace

NgSets::NgSets(const Instance& inst, int size) : size_(size), eta_(idx(inst.n_nodes())) {
  const int n = inst.n_customers();
  if (n >= kMaxNodes) throw std::invalid_argument("instance exceeds the supported number of customers");
  if (size < 1) throw std::invalid_argument("ng-set size must be positive");
  std::vector<int> order(idx(n));
  for (int i = 1; i <= n; ++i) {
    std::iota(order.begin(), order.end(), 1);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      if (a == i || b == i) return a == i && b != i;
      return inst.d(i, a) < inst.d(i, b);
    });
    for (int t = 0; t < std::min(size, n); ++t) eta_[idx(i)].set(idx(order[idx(t)]));
  }
}

void ArcFilter::force(int i, int j) {
  for (int k = 0; k < n_; ++k) {
    if (i != 0 && k != j) forbid(i, k);
    if (j != 0 && k != i) forbid(k, j);
  }
}

bool ArcFilter::route_allowed(std::span<const int> route) const {
  int prev = 0;
  for (int c : route) {
    if (!allowed(prev, c)) return false;
    prev = c;
  }
  return allowed(prev, 0);
}

double gamma(int i, int j, const DualValues& duals, const CutPool& cuts) {
  double g = -(j == 0 ? 0.0 : duals.alpha[idx(j)]);
  for (std::size_t k = 0; k < cuts.size(); ++k)
    if (cuts[k].contains(i) && !cuts[k].contains(j)) g -= duals.beta[k];
  return g;
}

GammaTable::GammaTable(const Instance& inst, const DualValues& duals, const CutPool& cuts)
    : n_(inst.n_nodes()), g_(idx(n_) * idx(n_), 0.0), cut_into_(idx(n_), 0.0), delta_(duals.delta) {
  std::vector<double> cut_part(g_.size(), 0.0);
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    const double beta = duals.beta[k];
    if (beta == 0.0) continue;
    for (int i : cuts[k].set)
      for (int j = 0; j < n_; ++j)
        if (!cuts[k].contains(j)) cut_part[idx(i) * idx(n_) + idx(j)] += beta;
  }
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      const double cp = cut_part[idx(i) * idx(n_) + idx(j)];
      g_[idx(i) * idx(n_) + idx(j)] = -(j == 0 ? 0.0 : duals.alpha[idx(j)]) - cp;
      cut_into_[idx(j)] = std::max(cut_into_[idx(j)], cp);
    }
  }
}

Label make_root(int j, const Instance& inst, const GammaTable& g, CostModel model) {
  Label l;
  l.n = j;
  l.rl = inst.max_load() - inst.mean_demand(j);
  l.ap = inst.d(j, 0);
  l.gamma = g(j, 0);
  l.ng.set(idx(j));
  l.nu.assign(idx(nu_width(inst, model)), inst.d(j, 0));
  l.pr = {j};
  l.completed_cost = completion_from(l.nu, j, inst, model);
  return l;
}

bool can_extend(const Label& label, int i, const Instance& inst) {
  return !label.ng.test(idx(i)) && label.rl >= inst.mean_demand(i) - kLoadTol;
}

Label extend(const Label& label, int i, const Instance& inst, const GammaTable& g, const NgSets& ng,
             CostModel model) {
  Label e;
  e.n = i;
  e.rl = label.rl - inst.mean_demand(i);
  e.ap = label.ap + inst.d(i, label.n);
  e.gamma = label.gamma + g(i, label.n);
  e.ng = label.ng & ng[i];
  e.ng.set(idx(i));
  e.nu.assign(label.nu.size(), 0.0);
  step_values(label.nu, label.n, i, inst, model, e.nu);
  e.pr.reserve(label.pr.size() + 1);
  e.pr.push_back(i);
  e.pr.insert(e.pr.end(), label.pr.begin(), label.pr.end());
  e.completed_cost = completion_from(e.nu, i, inst, model);
  return e;
}

double reduced_cost(const Label& label, const Instance&, const GammaTable& g) {
  return label.completed_cost + label.gamma + g(0, label.n) - g.delta();
}

bool dominates(const Label& a, const Label& b) {
  return dominates_view({a.rl, &a.ng, a.gamma, a.nu, a.completed_cost},
                        {b.rl, &b.ng, b.gamma, b.nu, b.completed_cost});
}

bool dominates_heuristic(const Label& a, const Label& b) {
  return dominates_heuristic_view({a.rl, &a.ng, a.gamma, a.nu, a.completed_cost},
                                  {b.rl, &b.ng, b.gamma, b.nu, b.completed_cost});
}

CompletionBounds precompute_bounds(const Instance& inst, const GammaTable& g) {
  const int n = inst.n_customers();
  CompletionBounds b;
  b.capacity_levels = static_cast<int>(std::floor(inst.max_load() + kLoadTol)) + 1;
  const int levels = b.capacity_levels;
  std::vector<int> w(idx(n) + 1, 0);
  bool zero_weight = false;
  for (int i = 1; i <= n; ++i) {
    w[idx(i)] = static_cast<int>(std::floor(inst.mean_demand(i) + kLoadTol));
    if (w[idx(i)] == 0) zero_weight = true;
  }

  b.rcsp_enabled = !zero_weight;
  b.psi.assign(idx(n + 1) * idx(levels), kInf);
  if (b.rcsp_enabled) {
    for (int c = 0; c < levels; ++c) {
      for (int j = 1; j <= n; ++j) {
        double best = c > 0 ? b.psi_at(j, c - 1) : kInf;
        const int rest = c - w[idx(j)];
        if (rest >= 0) {
          best = std::min(best, inst.d(0, j) + g(0, j));
          for (int i = 1; i <= n; ++i) {
            if (i == j) continue;
            const double p = b.psi_at(i, rest);
            if (p < kInf) best = std::min(best, p + inst.d(i, j) + g(i, j));
          }
        }
        b.psi[idx(j) * idx(levels) + idx(c)] = best;
      }
    }
  }

  b.cut_correction.assign(idx(n) + 1, 0.0);
  for (int j = 1; j <= n; ++j) b.cut_correction[idx(j)] = g.max_cut_term_into(j);

  std::vector<double> value(idx(n) + 1, 0.0);
  b.knapsack_enabled = true;
  for (int i = 1; i <= n; ++i) {
    double gi = 0.0;
    for (int j = 0; j <= n; ++j)
      if (j != i) gi = std::max(gi, -g(j, i));
    value[idx(i)] = gi;
    if (gi > 0.0 && w[idx(i)] == 0) b.knapsack_enabled = false;
  }
  b.kappa.assign(idx(levels), 0.0);
  if (b.knapsack_enabled) {
    for (int c = 1; c < levels; ++c) {
      double best = b.kappa[idx(c - 1)];
      for (int i = 1; i <= n; ++i)
        if (value[idx(i)] > 0.0 && w[idx(i)] <= c) best = std::max(best, b.kappa[idx(c - w[idx(i)])] + value[idx(i)]);
      b.kappa[idx(c)] = best;
    }
  }
  return b;
}

double completion_bound(const Label& label, const Instance& inst, const GammaTable& g, const CompletionBounds& b) {
  return std::max(rcsp_bound(label.n, label.rl, label.ap, label.gamma, inst, g, b),
                  knapsack_bound(label.n, label.rl, reduced_cost(label, inst, g), b));
}

double route_cost(std::span<const int> route, const Instance& inst, CostModel model) {
  switch (model) {
    case CostModel::optimal_restocking:
      return eval_optimal(route, inst).cost;
    case CostModel::detour_to_depot:
      return eval_dtd(route, inst);
    case CostModel::apriori:
      return apriori_cost(route, inst);
  }
  return 0.0;
}

namespace {

struct Node {
  int n = 0;
  int parent = -1;
  int slot = -1;
  bool alive = true;
  double rl = 0.0;
  double ap = 0.0;
  double gamma = 0.0;
  double completed = 0.0;
  NodeSet ng;
};

// Labels kept at one customer, with the fields used to reject dominance
// candidates stored contiguously. Removed entries keep id -1 until compaction.
struct Bucket {
  std::vector<double> rl, gamma, lo, hi;
  std::vector<int> id;
  std::size_t dead = 0;

  void add(double r, double g, double l, double h, int label) {
    rl.push_back(r);
    gamma.push_back(g);
    lo.push_back(l);
    hi.push_back(h);
    id.push_back(label);
  }

  void erase_at(std::size_t k) {
    id[k] = -1;
    ++dead;
  }

  void compact() {
    std::size_t out = 0;
    for (std::size_t k = 0; k < id.size(); ++k) {
      if (id[k] < 0) continue;
      rl[out] = rl[k];
      gamma[out] = gamma[k];
      lo[out] = lo[k];
      hi[out] = hi[k];
      id[out] = id[k];
      ++out;
    }
    rl.resize(out);
    gamma.resize(out);
    lo.resize(out);
    hi.resize(out);
    id.resize(out);
    dead = 0;
  }
};

class Labeler {
 public:
  Labeler(const Instance& inst, const DualValues& duals, const CutPool& cuts, const NgSets& ng,
          const ArcFilter& filter, const PricingOptions& opt)
      : inst_(inst),
        g_(inst, duals, cuts),
        ng_(ng),
        filter_(filter),
        opt_(opt),
        width_(nu_width(inst, opt.cost_model)),
        buckets_(idx(inst.n_nodes())) {
    if (opt.use_bounds) bounds_ = precompute_bounds(inst, g_);
    result_.best_reduced_cost = kInf;
    scratch_.assign(idx(width_), 0.0);

    const int n = inst.n_customers();
    const int cap = inst.capacity();
    needed_.resize(idx(n) + 1);
    for (int i = 1; i <= n; ++i) {
      auto& need = needed_[idx(i)];
      if (opt.cost_model == CostModel::apriori) {
        need = {0};
        continue;
      }
      const auto& dist = inst.demand(i);
      for (int k = dist.min_support(); k <= dist.max_support(); ++k) {
        need.push_back(cap * trips(k, cap, cap) + cap - k);
      }
      std::sort(need.begin(), need.end());
      need.erase(std::unique(need.begin(), need.end()), need.end());
    }

    if (opt.cost_model != CostModel::apriori) {
      double mass = 1.0;
      for (int i = 1; i <= n; ++i) {
        const auto probs = inst.demand(i).probs();
        mass = std::min(mass, std::accumulate(probs.begin(), probs.end(), 0.0));
      }
      shift_factor_ = std::pow(mass, n + 1);
    }

    // Candidate predecessors of each customer, cheapest reduced arc first.
    predecessors_.resize(idx(n) + 1);
    for (int j = 1; j <= n; ++j) {
      auto& pred = predecessors_[idx(j)];
      for (int i = 1; i <= n; ++i)
        if (i != j) pred.push_back(i);
      std::stable_sort(pred.begin(), pred.end(), [&](int a, int b) {
        return inst.d(a, j) + g_(a, j) < inst.d(b, j) + g_(b, j);
      });
      if (opt.arc_limit > 0 && static_cast<int>(pred.size()) > opt.arc_limit) pred.resize(idx(opt.arc_limit));
    }
  }

  PricingResult run() {
    const int n = inst_.n_customers();
    for (int j = 1; j <= n; ++j) {
      if (inst_.mean_demand(j) > inst_.max_load() + kLoadTol || !filter_.allowed(j, 0)) continue;
      Node root;
      root.n = j;
      root.rl = inst_.max_load() - inst_.mean_demand(j);
      root.ap = inst_.d(j, 0);
      root.gamma = g_(j, 0);
      root.ng.set(idx(j));
      ext_ = {};
      ext_.root_value = inst_.d(j, 0);
      offer(root);
      if (stopped_) return finish();
    }

    long pops = 0;
    while (!queue_.empty()) {
      const int id = -queue_.top().second;
      queue_.pop();
      if (!nodes_[idx(id)].alive) continue;
      if (opt_.deadline && (++pops & 255) == 0 && std::chrono::steady_clock::now() > *opt_.deadline) {
        result_.complete = false;
        break;
      }
      const Node cur = nodes_[idx(id)];
      double arrive_full = 0.0;
      bool have_full = false;
      for (int i : predecessors_[idx(cur.n)]) {
        if (cur.ng.test(idx(i)) || cur.rl < inst_.mean_demand(i) - kLoadTol || !filter_.allowed(i, cur.n)) continue;
        if (!have_full && opt_.cost_model != CostModel::apriori) {
          arrive_full = arrival(nu_of(cur.slot), cur.n, inst_.capacity());
          have_full = true;
        }
        Node e;
        e.n = i;
        e.parent = id;
        e.rl = cur.rl - inst_.mean_demand(i);
        e.ap = cur.ap + inst_.d(i, cur.n);
        e.gamma = cur.gamma + g_(i, cur.n);
        e.ng = cur.ng & ng_[i];
        e.ng.set(idx(i));
        ext_.root_value = -1.0;
        ext_.parent_slot = cur.slot;
        ext_.parent_n = cur.n;
        ext_.arrive_full = arrive_full;
        ext_.refill = inst_.d(i, 0) + inst_.d(0, cur.n) + arrive_full;
        offer(e);
        if (stopped_) return finish();
      }
    }
    return finish();
  }

 private:
  // Pending extension: values of the new label are produced on demand.
  struct Extension {
    double root_value = -1.0;  // >= 0 for root labels (constant table)
    int parent_slot = -1;
    int parent_n = 0;
    double arrive_full = 0.0;
    double refill = 0.0;
  };

  std::span<const double> nu_of(int slot) const {
    return {pool_.data() + idx(slot) * idx(width_), idx(width_)};
  }

  double arrival(std::span<const double> nu, int n, int q) const {
    const auto& dist = inst_.demand(n);
    return arrival_term(nu, dist, inst_.d(n, 0) + inst_.d(0, n), q, inst_.capacity());
  }

  double entry(int i, int q) const {
    if (ext_.root_value >= 0.0) return ext_.root_value;
    const auto in = nu_of(ext_.parent_slot);
    const int pn = ext_.parent_n;
    if (opt_.cost_model == CostModel::apriori) return inst_.d(i, pn) + in[0];
    const int cap = inst_.capacity();
    const double direct = inst_.d(i, pn) + (q == cap ? ext_.arrive_full : arrival(in, pn, q));
    return (opt_.cost_model == CostModel::optimal_restocking && ext_.refill < direct) ? ext_.refill : direct;
  }

  void fill_needed(int i) {
    for (int q : needed_[idx(i)]) scratch_[idx(q)] = entry(i, q);
  }

  void fill_all(int i) {
    for (int q = 0; q < width_; ++q) scratch_[idx(q)] = entry(i, q);
  }

  int store() {
    int slot = 0;
    if (!free_.empty()) {
      slot = free_.back();
      free_.pop_back();
    } else {
      slot = static_cast<int>(pool_.size() / idx(width_));
      pool_.resize(pool_.size() + idx(width_));
    }
    std::copy(scratch_.begin(), scratch_.end(), pool_.begin() + static_cast<std::ptrdiff_t>(idx(slot) * idx(width_)));
    return slot;
  }

  void kill(int id) {
    auto& node = nodes_[idx(id)];
    node.alive = false;
    if (node.slot >= 0) free_.push_back(node.slot);
    node.slot = -1;
    ++result_.labels_dominated;
  }

  View view_of(const Node& node, std::span<const double> nu) const {
    return {node.rl, &node.ng, node.gamma, nu, node.completed};
  }

  // A label with larger gamma may still dominate when its value table (or,
  // in heuristic mode, its completed cost) is lower by enough to cover the
  // difference: a uniform shift of the table moves the cost of any completion
  // by at least shift_factor_ times the shift.
  bool dom(const View& a, const View& b) {
    ++result_.dominance_checks;
    if (a.rl < b.rl - kDomTol || (*a.ng & ~*b.ng).any()) return false;
    const double lift = std::max(0.0, a.gamma - b.gamma) / shift_factor_;
    if (opt_.mode != PricingMode::exact) return a.completed + lift <= b.completed + kDomTol;
    const std::size_t w = a.nu.size();
    if (a.nu[0] + lift > b.nu[0] + kDomTol || a.nu[w - 1] + lift > b.nu[w - 1] + kDomTol) return false;
    for (std::size_t q = 1; q + 1 < w; ++q)
      if (a.nu[q] + lift > b.nu[q] + kDomTol) return false;
    return true;
  }

  bool may_dominate(double rl_a, double g_a, double lo_a, double hi_a, double rl_b, double g_b, double lo_b,
                    double hi_b) const {
    if (rl_a < rl_b - kDomTol) return false;
    const double lift = std::max(0.0, g_a - g_b) / shift_factor_;
    return lo_a + lift <= lo_b + kDomTol && hi_a + lift <= hi_b + kDomTol;
  }

  void offer(Node node) {
    ++result_.labels_created;
    if (opt_.use_bounds && rcsp_bound(node.n, node.rl, node.ap, node.gamma, inst_, g_, bounds_) >= -opt_.eps) {
      ++result_.labels_bounded;
      return;
    }
    fill_needed(node.n);
    node.completed = completion_from(scratch_, node.n, inst_, opt_.cost_model);
    const double phi = node.completed + node.gamma + g_(0, node.n) - g_.delta();
    const bool closable = filter_.allowed(0, node.n);
    if (closable) result_.best_reduced_cost = std::min(result_.best_reduced_cost, phi);
    if (opt_.use_bounds && knapsack_bound(node.n, node.rl, phi, bounds_) >= -opt_.eps) {
      ++result_.labels_bounded;
      return;
    }

    const bool exact = opt_.mode == PricingMode::exact;
    if (exact || !opt_.use_dominance) fill_all(node.n);

    auto& bucket = buckets_[idx(node.n)];
    const int id = static_cast<int>(nodes_.size());
    if (opt_.use_dominance) {
      const View mine = view_of(node, scratch_);
      const double lo = exact ? scratch_.front() : node.completed;
      const double hi = exact ? scratch_.back() : node.completed;
      const std::size_t size = bucket.id.size();
      for (std::size_t k = 0; k < size; ++k) {
        if (!may_dominate(bucket.rl[k], bucket.gamma[k], bucket.lo[k], bucket.hi[k], node.rl, node.gamma, lo, hi) ||
            bucket.id[k] < 0)
          continue;
        const Node& o = nodes_[idx(bucket.id[k])];
        if (dom(view_of(o, nu_of(o.slot)), mine)) {
          ++result_.labels_dominated;
          return;
        }
      }
      for (std::size_t k = 0; k < size; ++k) {
        if (!may_dominate(node.rl, node.gamma, lo, hi, bucket.rl[k], bucket.gamma[k], bucket.lo[k], bucket.hi[k]) ||
            bucket.id[k] < 0)
          continue;
        const Node& o = nodes_[idx(bucket.id[k])];
        if (dom(mine, view_of(o, nu_of(o.slot)))) {
          kill(bucket.id[k]);
          bucket.erase_at(k);
        }
      }
      if (bucket.dead * 2 > size) bucket.compact();
      if (!exact) fill_all(node.n);
      bucket.add(node.rl, node.gamma, lo, hi, id);
    }

    node.slot = store();
    nodes_.push_back(node);
    queue_.emplace(node.rl, -id);

    if (closable && phi < -opt_.eps) {
      if (static_cast<int>(best_.size()) < opt_.max_columns) {
        best_.emplace(phi, id);
      } else if (phi < best_.top().first) {
        best_.pop();
        best_.emplace(phi, id);
      }
      if (opt_.stop_when_full && static_cast<int>(best_.size()) >= opt_.max_columns) {
        stopped_ = true;
        result_.complete = false;
      }
    }
  }

  PricingResult finish() {
    std::vector<std::pair<double, int>> picked;
    while (!best_.empty()) {
      picked.push_back(best_.top());
      best_.pop();
    }
    std::reverse(picked.begin(), picked.end());
    for (const auto& [phi, id] : picked) {
      PricedRoute r;
      for (int cur = id; cur >= 0; cur = nodes_[idx(cur)].parent) r.route.push_back(nodes_[idx(cur)].n);
      r.cost = nodes_[idx(id)].completed;
      r.reduced_cost = phi;
      result_.routes.push_back(std::move(r));
    }
    return std::move(result_);
  }

  const Instance& inst_;
  GammaTable g_;
  const NgSets& ng_;
  const ArcFilter& filter_;
  const PricingOptions& opt_;
  int width_;
  double shift_factor_ = 1.0;
  CompletionBounds bounds_;

  std::vector<std::vector<int>> needed_;
  std::vector<std::vector<int>> predecessors_;
  std::vector<double> scratch_;
  Extension ext_;
  std::vector<Node> nodes_;
  std::vector<double> pool_;
  std::vector<int> free_;
  std::vector<Bucket> buckets_;
  std::priority_queue<std::pair<double, int>> queue_;
  std::priority_queue<std::pair<double, int>> best_;  // max-heap on phi keeps the most negative
  bool stopped_ = false;
  PricingResult result_;
};

}  // namespace

PricingResult price(const Instance& inst, const DualValues& duals, const CutPool& cuts, const NgSets& ng,
                    const ArcFilter& filter, const PricingOptions& options) {
  if (static_cast<int>(duals.alpha.size()) != inst.n_nodes()) throw std::invalid_argument("dual vector size mismatch");
  if (duals.beta.size() != cuts.size()) throw std::invalid_argument("cut dual count mismatch");
  Labeler labeler(inst, duals, cuts, ng, filter, options);
  return labeler.run();
}

}  // namespace vrpsd
