#include "vrpsd/master.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace vrpsd {

namespace {
constexpr double kDualSignTol = 1e-6;
}

Master::Master(const Instance& inst, std::optional<int> fleet, const RouteCostFn& cost)
    : inst_(&inst), fleet_(fleet) {
  const int n = inst.n_customers();
  double depot_sum = 0.0;
  for (int i = 1; i <= n; ++i) depot_sum += inst.d(0, i) + inst.d(i, 0);
  big_m_ = 10.0 * depot_sum;

  for (int i = 1; i <= n; ++i) lp_.add_row(lp::RowSense::equal, 1.0);
  if (fleet_) {
    if (*fleet_ < 1) throw std::invalid_argument("fleet size must be positive");
    fleet_row_ = lp_.add_row(lp::RowSense::equal, static_cast<double>(*fleet_));
  }

  for (int i = 0; i < n; ++i) {
    const lp::Entry e{i, 1.0};
    artificial_columns_.push_back(lp_.add_column(big_m_, std::span(&e, 1)));
  }
  if (fleet_) {
    const lp::Entry plus{fleet_row_, 1.0};
    const lp::Entry minus{fleet_row_, -1.0};
    artificial_columns_.push_back(lp_.add_column(big_m_, std::span(&plus, 1)));
    artificial_columns_.push_back(lp_.add_column(big_m_, std::span(&minus, 1)));
  }

  for (int i = 1; i <= n; ++i) {
    if (inst.mean_demand(i) > inst.max_load() + 1e-9) {
      throw std::invalid_argument("customer " + std::to_string(i) + " exceeds the route load limit");
    }
    Route r{i};
    const double c = cost(r);
    add_column(make_column(std::move(r), c, inst));
  }
  duals_.alpha.assign(static_cast<std::size_t>(n) + 1, 0.0);
}

std::vector<lp::Entry> Master::column_entries(const Column& col) const {
  std::map<int, double> rows;
  for (int c : col.route) rows[c - 1] += 1.0;
  for (std::size_t k = 0; k < cuts_.size(); ++k) {
    const int coef = cut_coefficient(cuts_[k], col.route);
    if (coef != 0) rows[cut_rows_[k]] += coef;
  }
  if (fleet_) rows[fleet_row_] += 1.0;
  std::vector<lp::Entry> entries;
  entries.reserve(rows.size());
  for (const auto& [row, v] : rows) entries.push_back({row, v});
  return entries;
}

int Master::add_column(Column column) {
  if (column.route.empty()) throw std::invalid_argument("empty route");
  if (column.hash == 0) column.hash = route_hash(column.route);
  auto& bucket = by_hash_[column.hash];
  for (int idx : bucket)
    if (columns_[static_cast<std::size_t>(idx)].route == column.route) return -1;
  const auto entries = column_entries(column);
  const int idx = static_cast<int>(columns_.size());
  lp_column_.push_back(lp_.add_column(column.cost, entries));
  penalized_.push_back(0);
  bucket.push_back(idx);
  columns_.push_back(std::move(column));
  theta_.push_back(0.0);
  certified_ = false;
  return idx;
}

int Master::add_columns(std::vector<Column> columns) {
  int added = 0;
  for (auto& c : columns)
    if (add_column(std::move(c)) >= 0) ++added;
  return added;
}

void Master::add_cut(const Cut& cut) {
  if (!cuts_.add(cut)) return;
  const Cut& stored = cuts_[cuts_.size() - 1];
  std::vector<lp::Entry> entries;
  for (std::size_t r = 0; r < columns_.size(); ++r) {
    const int coef = cut_coefficient(stored, columns_[r].route);
    if (coef != 0) entries.push_back({lp_column_[r], static_cast<double>(coef)});
  }
  cut_rows_.push_back(lp_.add_row(lp::RowSense::greater_equal, stored.rhs, entries));
  duals_.beta.push_back(0.0);
  certified_ = false;
}

void Master::set_penalized(int column, bool penalized) {
  auto& flag = penalized_[static_cast<std::size_t>(column)];
  if ((flag != 0) == penalized) return;
  flag = penalized ? 1 : 0;
  const auto& col = columns_[static_cast<std::size_t>(column)];
  lp_.set_cost(lp_column_[static_cast<std::size_t>(column)], penalized ? col.cost + big_m_ : col.cost);
  certified_ = false;
}

void Master::apply_penalties(const std::function<bool(const Column&)>& excluded) {
  for (std::size_t r = 0; r < columns_.size(); ++r) set_penalized(static_cast<int>(r), excluded(columns_[r]));
}

double Master::penalized_mass() const {
  double mass = 0.0;
  for (std::size_t r = 0; r < columns_.size(); ++r)
    if (penalized_[r]) mass += theta_[r];
  return mass;
}

lp::Status Master::solve() {
  const auto status = lp_.solve();
  lp_iterations_ += lp_.stats().iterations;
  if (status != lp::Status::optimal) return status;

  objective_ = lp_.objective();
  const int n = inst_->n_customers();
  const auto y = lp_.duals();
  duals_.alpha.assign(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = 1; i <= n; ++i) duals_.alpha[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i - 1)];
  duals_.beta.resize(cut_rows_.size());
  for (std::size_t k = 0; k < cut_rows_.size(); ++k) {
    double b = y[static_cast<std::size_t>(cut_rows_[k])];
    if (b < -kDualSignTol) throw std::logic_error("negative dual on a capacity cut row");
    duals_.beta[k] = std::max(0.0, b);
  }
  duals_.delta = fleet_ ? y[static_cast<std::size_t>(fleet_row_)] : 0.0;

  for (std::size_t r = 0; r < columns_.size(); ++r) theta_[r] = lp_.value(lp_column_[r]);
  artificial_mass_ = 0.0;
  for (int a : artificial_columns_) artificial_mass_ += lp_.value(a);
  return status;
}

double Master::reduced_cost(int column) const {
  const auto& col = columns_[static_cast<std::size_t>(column)];
  double rc = col.cost - duals_.delta;
  for (int c : col.route) rc -= duals_.alpha[static_cast<std::size_t>(c)];
  for (std::size_t k = 0; k < cuts_.size(); ++k) rc -= duals_.beta[k] * cut_coefficient(cuts_[k], col.route);
  return rc;
}

ArcFlows Master::arc_flows() const {
  return vrpsd::arc_flows(columns_, theta_, inst_->n_nodes());
}

double Master::lower_bound_valid() const {
  if (!certified_) throw std::logic_error("master bound requested before exact pricing certified it");
  return objective_;
}

}  // namespace vrpsd
