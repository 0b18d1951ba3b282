#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "vrpsd/column.hpp"
#include "vrpsd/cuts.hpp"
#include "vrpsd/instance.hpp"
#include "vrpsd/lp.hpp"

namespace vrpsd {

/// Duals of the restricted master. alpha is indexed by node with alpha[0] = 0,
/// beta[k] >= 0 belongs to cut k of the pool, delta to the fleet row.
struct DualValues {
  std::vector<double> alpha;
  std::vector<double> beta;
  double delta = 0.0;
};

using RouteCostFn = std::function<double(std::span<const int>)>;

/// Set-partitioning LP over a global column pool, with optional fleet row and
/// rounded capacity cut rows. Artificial columns of cost big_m() keep every
/// row satisfiable. Columns never leave the pool; branching excludes them by
/// adding big_m() to their cost.
class Master {
 public:
  Master(const Instance& inst, std::optional<int> fleet, const RouteCostFn& cost);

  // Index of the added column, or -1 when the route is already pooled.
  int add_column(Column column);
  int add_columns(std::vector<Column> columns);
  void add_cut(const Cut& cut);

  lp::Status solve();

  double objective() const { return objective_; }
  const DualValues& duals() const { return duals_; }
  const std::vector<double>& theta() const { return theta_; }
  // Sum of artificial values in the last solution.
  double artificial_mass() const { return artificial_mass_; }
  // Total theta of penalized columns in the last solution.
  double penalized_mass() const;

  const std::vector<Column>& columns() const { return columns_; }
  const CutPool& cuts() const { return cuts_; }
  std::optional<int> fleet() const { return fleet_; }
  double big_m() const { return big_m_; }

  void set_penalized(int column, bool penalized);
  bool penalized(int column) const { return penalized_[static_cast<std::size_t>(column)] != 0; }
  // Penalizes exactly the columns for which `excluded` returns true.
  void apply_penalties(const std::function<bool(const Column&)>& excluded);

  // c_r - sum a_ir alpha_i - sum beta_k coef_kr - delta, using the column's true cost.
  double reduced_cost(int column) const;

  ArcFlows arc_flows() const;

  // Marks the current objective as a certified bound (exact pricing found nothing).
  void certify() { certified_ = true; }
  bool certified() const { return certified_; }
  // Throws std::logic_error unless certify() was called after the last change.
  double lower_bound_valid() const;

  const lp::SolveStats& lp_stats() const { return lp_.stats(); }
  long total_lp_iterations() const { return lp_iterations_; }

 private:
  std::vector<lp::Entry> column_entries(const Column& col) const;

  const Instance* inst_;
  std::optional<int> fleet_;
  double big_m_ = 0.0;
  lp::LinearProgram lp_;
  int fleet_row_ = -1;
  std::vector<int> cut_rows_;
  std::vector<Column> columns_;
  std::vector<int> lp_column_;
  std::vector<char> penalized_;
  std::vector<int> artificial_columns_;
  std::unordered_map<std::uint64_t, std::vector<int>> by_hash_;
  CutPool cuts_;

  double objective_ = 0.0;
  DualValues duals_;
  std::vector<double> theta_;
  double artificial_mass_ = 0.0;
  bool certified_ = false;
  long lp_iterations_ = 0;
};

}  // namespace vrpsd
