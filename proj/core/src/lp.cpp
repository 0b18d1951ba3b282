#include "vrpsd/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vrpsd::lp {

namespace {

constexpr double kPrimalTol = 1e-9;
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kHarrisDelta = 1e-9;
constexpr double kPhase1Tol = 1e-7;
constexpr int kRefactorEvery = 64;
constexpr int kDegenerateBeforeBland = 50;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Variable encoding inside the basis: j >= 0 is a structural column,
// slack of row r is -(2r + 1), artificial of row r is -(2r + 2).
constexpr int slack_id(int r) { return -(2 * r + 1); }
constexpr int artificial_id(int r) { return -(2 * r + 2); }
constexpr bool is_structural(int v) { return v >= 0; }
constexpr bool is_artificial(int v) { return v < 0 && ((-v - 1) % 2) == 1; }
constexpr int logical_row(int v) { return (-v - 1) / 2; }

}  // namespace

struct LinearProgram::Impl {
  struct Row {
    RowSense sense = RowSense::equal;
    double rhs = 0.0;
    double art_sign = 1.0;
  };

  std::vector<Row> rows;
  std::vector<std::vector<Entry>> columns;  // entries over rows
  std::vector<double> costs;

  // Basis state.
  std::vector<int> basis;     // basic variable per basis position
  int basis_rows = 0;         // rows covered by the current basis
  Eigen::MatrixXd binv;       // basis inverse
  std::vector<double> xb;     // basic values
  std::vector<int> pos_struct;
  std::vector<int> pos_slack;
  std::vector<int> pos_art;
  std::vector<char> art_retired;  // artificial left the basis; may never re-enter
  int since_refactor = 0;

  // Solution.
  std::vector<double> y;
  double objective = 0.0;
  Status status = Status::optimal;
  SolveStats stats;

  int m() const { return static_cast<int>(rows.size()); }
  int n() const { return static_cast<int>(columns.size()); }

  double var_cost(int v, bool phase1) const {
    if (phase1) return is_artificial(v) ? 1.0 : 0.0;
    return is_structural(v) ? costs[static_cast<std::size_t>(v)] : 0.0;
  }

  int& pos_of(int v) {
    if (is_structural(v)) return pos_struct[static_cast<std::size_t>(v)];
    return is_artificial(v) ? pos_art[static_cast<std::size_t>(logical_row(v))]
                            : pos_slack[static_cast<std::size_t>(logical_row(v))];
  }

  // alpha = Binv * a_v.
  void ftran(int v, Eigen::VectorXd& alpha) const {
    alpha.setZero(m());
    if (is_structural(v)) {
      for (const auto& e : columns[static_cast<std::size_t>(v)]) alpha += binv.col(e.index) * e.value;
    } else {
      const int r = logical_row(v);
      const double coef = is_artificial(v) ? rows[static_cast<std::size_t>(r)].art_sign : -1.0;
      alpha = binv.col(r) * coef;
    }
  }

  void refactor() {
    const int mm = m();
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(mm, mm);
    for (int p = 0; p < mm; ++p) {
      const int v = basis[static_cast<std::size_t>(p)];
      if (is_structural(v)) {
        for (const auto& e : columns[static_cast<std::size_t>(v)]) b(e.index, p) = e.value;
      } else {
        const int r = logical_row(v);
        b(r, p) = is_artificial(v) ? rows[static_cast<std::size_t>(r)].art_sign : -1.0;
      }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
    if (!lu.isInvertible()) throw std::runtime_error("simplex basis became singular");
    binv = lu.inverse();
    recompute_xb();
    since_refactor = 0;
    ++stats.refactorizations;
  }

  void recompute_xb() {
    const int mm = m();
    Eigen::VectorXd rhs(mm);
    for (int r = 0; r < mm; ++r) rhs(r) = rows[static_cast<std::size_t>(r)].rhs;
    Eigen::VectorXd x = binv * rhs;
    xb.assign(static_cast<std::size_t>(mm), 0.0);
    for (int p = 0; p < mm; ++p) xb[static_cast<std::size_t>(p)] = x(p);
  }

  std::vector<double> primal_structural() const {
    std::vector<double> x(static_cast<std::size_t>(n()), 0.0);
    for (std::size_t p = 0; p < basis.size(); ++p) {
      if (is_structural(basis[p])) x[static_cast<std::size_t>(basis[p])] = std::max(0.0, xb[p]);
    }
    return x;
  }

  void set_logical_basic(int r, int p, const std::vector<double>& x) {
    auto& row = rows[static_cast<std::size_t>(r)];
    double activity = 0.0;
    if (!x.empty()) {
      for (int j = 0; j < n(); ++j) {
        if (x[static_cast<std::size_t>(j)] == 0.0) continue;
        for (const auto& e : columns[static_cast<std::size_t>(j)])
          if (e.index == r) activity += e.value * x[static_cast<std::size_t>(j)];
      }
    }
    const double gap = row.rhs - activity;
    int v = 0;
    if (row.sense == RowSense::greater_equal && gap <= 0.0) {
      v = slack_id(r);
    } else {
      row.art_sign = gap >= 0.0 ? 1.0 : -1.0;
      art_retired[static_cast<std::size_t>(r)] = 0;
      v = artificial_id(r);
    }
    basis[static_cast<std::size_t>(p)] = v;
    pos_of(v) = p;
  }

  void cold_start() {
    const int mm = m();
    basis.assign(static_cast<std::size_t>(mm), 0);
    pos_struct.assign(static_cast<std::size_t>(n()), -1);
    pos_slack.assign(static_cast<std::size_t>(mm), -1);
    pos_art.assign(static_cast<std::size_t>(mm), -1);
    art_retired.assign(static_cast<std::size_t>(mm), 0);
    const std::vector<double> none;
    for (int r = 0; r < mm; ++r) set_logical_basic(r, r, none);
    basis_rows = mm;
    refactor();
  }

  void extend_basis_to_new_rows() {
    const int mm = m();
    if (basis_rows == mm) return;
    const auto x = primal_structural();
    basis.resize(static_cast<std::size_t>(mm));
    pos_slack.resize(static_cast<std::size_t>(mm), -1);
    pos_art.resize(static_cast<std::size_t>(mm), -1);
    art_retired.resize(static_cast<std::size_t>(mm), 0);
    for (int r = basis_rows; r < mm; ++r) set_logical_basic(r, r, x);
    basis_rows = mm;
    refactor();
  }

  bool feasible_basis() const {
    return std::all_of(xb.begin(), xb.end(), [](double v) { return v >= -1e-7; });
  }

  void compute_duals(bool phase1) {
    const int mm = m();
    Eigen::RowVectorXd cb(mm);
    for (int p = 0; p < mm; ++p) cb(p) = var_cost(basis[static_cast<std::size_t>(p)], phase1);
    Eigen::RowVectorXd yy = cb * binv;
    y.assign(static_cast<std::size_t>(mm), 0.0);
    for (int r = 0; r < mm; ++r) y[static_cast<std::size_t>(r)] = yy(r);
  }

  double structural_reduced_cost(int j, bool phase1) const {
    double d = phase1 ? 0.0 : costs[static_cast<std::size_t>(j)];
    for (const auto& e : columns[static_cast<std::size_t>(j)]) d -= y[static_cast<std::size_t>(e.index)] * e.value;
    return d;
  }

  // Returns the entering variable or 0x7fffffff when the basis is optimal.
  int choose_entering(bool phase1, bool bland) {
    constexpr int kNone = std::numeric_limits<int>::max();
    int best = kNone;
    double best_d = -kDualTol;
    for (int j = 0; j < n(); ++j) {
      if (pos_struct[static_cast<std::size_t>(j)] >= 0) continue;
      const double d = structural_reduced_cost(j, phase1);
      if (d < best_d) {
        best = j;
        best_d = d;
        if (bland) return best;
      }
    }
    for (int r = 0; r < m(); ++r) {
      if (rows[static_cast<std::size_t>(r)].sense != RowSense::greater_equal) continue;
      if (pos_slack[static_cast<std::size_t>(r)] >= 0) continue;
      const double d = y[static_cast<std::size_t>(r)];  // cost 0, column -e_r
      if (d < best_d) {
        best = slack_id(r);
        best_d = d;
        if (bland) return best;
      }
    }
    return best;
  }

  double upper_of(int v, bool phase1) const {
    if (is_artificial(v) && !phase1) return 0.0;
    return kInf;
  }

  // Ratio test; returns leaving basis position or -1 when unbounded.
  int choose_leaving(const Eigen::VectorXd& alpha, bool phase1, bool bland, double& step) const {
    const int mm = m();
    auto exact_ratio = [&](int p) {
      const double a = alpha(p);
      const double x = xb[static_cast<std::size_t>(p)];
      if (a > kPivotTol) return std::max(0.0, x) / a;
      const double ub = upper_of(basis[static_cast<std::size_t>(p)], phase1);
      if (a < -kPivotTol && std::isfinite(ub)) return std::max(0.0, ub - x) / -a;
      return kInf;
    };

    if (bland) {
      int leave = -1;
      double best = kInf;
      for (int p = 0; p < mm; ++p) {
        const double t = exact_ratio(p);
        if (!std::isfinite(t)) continue;
        if (t < best - 1e-12 ||
            (t <= best + 1e-12 && leave >= 0 && basis[static_cast<std::size_t>(p)] < basis[static_cast<std::size_t>(leave)])) {
          best = t;
          leave = p;
        }
      }
      step = leave >= 0 ? best : kInf;
      return leave;
    }

    // Harris two-pass ratio test.
    double tmax = kInf;
    for (int p = 0; p < mm; ++p) {
      const double a = alpha(p);
      const double x = xb[static_cast<std::size_t>(p)];
      if (a > kPivotTol) {
        tmax = std::min(tmax, (x + kHarrisDelta) / a);
      } else if (a < -kPivotTol) {
        const double ub = upper_of(basis[static_cast<std::size_t>(p)], phase1);
        if (std::isfinite(ub)) tmax = std::min(tmax, (ub + kHarrisDelta - x) / -a);
      }
    }
    if (!std::isfinite(tmax)) return -1;
    int leave = -1;
    double best_abs = 0.0;
    for (int p = 0; p < mm; ++p) {
      const double t = exact_ratio(p);
      if (!std::isfinite(t) || t > tmax) continue;
      if (std::abs(alpha(p)) > best_abs) {
        best_abs = std::abs(alpha(p));
        leave = p;
      }
    }
    step = leave >= 0 ? exact_ratio(leave) : kInf;
    return leave;
  }

  void pivot(int entering, int leave, const Eigen::VectorXd& alpha, double step) {
    const int mm = m();
    for (int p = 0; p < mm; ++p) xb[static_cast<std::size_t>(p)] -= step * alpha(p);
    xb[static_cast<std::size_t>(leave)] = step;

    const int old = basis[static_cast<std::size_t>(leave)];
    pos_of(old) = -1;
    if (is_artificial(old)) art_retired[static_cast<std::size_t>(logical_row(old))] = 1;
    basis[static_cast<std::size_t>(leave)] = entering;
    pos_of(entering) = leave;

    const double piv = alpha(leave);
    binv.row(leave) /= piv;
    for (int p = 0; p < mm; ++p) {
      if (p == leave || alpha(p) == 0.0) continue;
      binv.row(p) -= alpha(p) * binv.row(leave);
    }
    for (auto& v : xb)
      if (v < 0.0 && v > -kHarrisDelta * 10) v = 0.0;

    if (++since_refactor >= kRefactorEvery) refactor();
  }

  Status run_phase(bool phase1, long max_iterations) {
    Eigen::VectorXd alpha;
    int degenerate = 0;
    bool bland = false;
    while (true) {
      if (stats.iterations >= max_iterations) return Status::iteration_limit;
      compute_duals(phase1);
      const int entering = choose_entering(phase1, bland);
      if (entering == std::numeric_limits<int>::max()) {
        if (bland) {
          bland = false;
          continue;  // confirm optimality with Dantzig pricing
        }
        return Status::optimal;
      }
      ftran(entering, alpha);
      double step = 0.0;
      const int leave = choose_leaving(alpha, phase1, bland, step);
      if (leave < 0) return Status::unbounded;
      ++stats.iterations;
      if (phase1) ++stats.phase1_iterations;
      if (bland) ++stats.bland_iterations;
      if (step <= 1e-12) {
        if (++degenerate > kDegenerateBeforeBland) bland = true;
      } else {
        degenerate = 0;
        bland = false;
      }
      pivot(entering, leave, alpha, step);
    }
  }

  bool artificial_positive() const {
    for (std::size_t p = 0; p < basis.size(); ++p)
      if (is_artificial(basis[p]) && xb[p] > kPhase1Tol) return true;
    return false;
  }

  Status solve(long max_iterations) {
    stats = {};
    if (m() == 0) {
      objective = 0.0;
      y.clear();
      return status = Status::optimal;
    }
    if (basis.empty() || static_cast<int>(pos_struct.size()) != n() || basis_rows == 0) {
      if (static_cast<int>(pos_struct.size()) != n()) pos_struct.resize(static_cast<std::size_t>(n()), -1);
      if (basis.empty() || basis_rows == 0) cold_start();
    }
    extend_basis_to_new_rows();
    if (!feasible_basis()) cold_start();

    if (artificial_positive()) {
      const Status s = run_phase(true, max_iterations);
      if (s == Status::iteration_limit) return status = s;
      if (artificial_positive()) {
        compute_duals(false);
        objective = kInf;
        return status = Status::infeasible;
      }
    }
    const Status s = run_phase(false, max_iterations);
    compute_duals(false);
    objective = 0.0;
    for (std::size_t p = 0; p < basis.size(); ++p)
      if (is_structural(basis[p])) objective += costs[static_cast<std::size_t>(basis[p])] * std::max(0.0, xb[p]);
    return status = s;
  }
};

LinearProgram::LinearProgram() : impl_(std::make_unique<Impl>()) {}
LinearProgram::~LinearProgram() = default;
LinearProgram::LinearProgram(LinearProgram&&) noexcept = default;
LinearProgram& LinearProgram::operator=(LinearProgram&&) noexcept = default;

int LinearProgram::add_row(RowSense sense, double rhs, std::span<const Entry> entries) {
  const int r = impl_->m();
  impl_->rows.push_back({sense, rhs, 1.0});
  for (const auto& e : entries) {
    if (e.index < 0 || e.index >= impl_->n()) throw std::out_of_range("row entry references unknown column");
    if (e.value != 0.0) impl_->columns[static_cast<std::size_t>(e.index)].push_back({r, e.value});
  }
  return r;
}

int LinearProgram::add_column(double cost, std::span<const Entry> entries) {
  const int j = impl_->n();
  std::vector<Entry> col;
  col.reserve(entries.size());
  for (const auto& e : entries) {
    if (e.index < 0 || e.index >= impl_->m()) throw std::out_of_range("column entry references unknown row");
    if (e.value != 0.0) col.push_back(e);
  }
  impl_->columns.push_back(std::move(col));
  impl_->costs.push_back(cost);
  if (!impl_->basis.empty()) impl_->pos_struct.push_back(-1);
  return j;
}

void LinearProgram::set_cost(int column, double cost) { impl_->costs.at(static_cast<std::size_t>(column)) = cost; }
double LinearProgram::cost(int column) const { return impl_->costs.at(static_cast<std::size_t>(column)); }
int LinearProgram::num_rows() const { return impl_->m(); }
int LinearProgram::num_columns() const { return impl_->n(); }

Status LinearProgram::solve(long max_iterations) { return impl_->solve(max_iterations); }

double LinearProgram::objective() const { return impl_->objective; }

double LinearProgram::value(int column) const {
  const int p = impl_->pos_struct.empty() ? -1 : impl_->pos_struct.at(static_cast<std::size_t>(column));
  return p >= 0 ? std::max(0.0, impl_->xb[static_cast<std::size_t>(p)]) : 0.0;
}

std::vector<double> LinearProgram::values() const { return impl_->primal_structural(); }

double LinearProgram::dual(int row) const { return impl_->y.at(static_cast<std::size_t>(row)); }
std::vector<double> LinearProgram::duals() const { return impl_->y; }

double LinearProgram::reduced_cost(int column) const {
  return impl_->structural_reduced_cost(column, false);
}

void LinearProgram::reset_basis() {
  impl_->basis.clear();
  impl_->basis_rows = 0;
}

const SolveStats& LinearProgram::stats() const { return impl_->stats; }

}  // namespace vrpsd::lp
