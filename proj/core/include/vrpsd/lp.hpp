#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace vrpsd::lp {

enum class RowSense : std::uint8_t { equal, greater_equal };

enum class Status : std::uint8_t { optimal, infeasible, unbounded, iteration_limit };

struct Entry {
  int index = 0;
  double value = 0.0;
};

struct SolveStats {
  long iterations = 0;
  long phase1_iterations = 0;
  long refactorizations = 0;
  long bland_iterations = 0;
};

/// Dense-basis revised primal simplex for min c'x, rows (= or >=), x >= 0.
///
/// The problem may be modified between solves: added columns keep the basis,
/// cost changes keep it primal feasible, and added rows enter with their own
/// slack or artificial basic, so every re-solve warm-starts from the last basis.
class LinearProgram {
 public:
  LinearProgram();
  ~LinearProgram();
  LinearProgram(LinearProgram&&) noexcept;
  LinearProgram& operator=(LinearProgram&&) noexcept;
  LinearProgram(const LinearProgram&) = delete;
  LinearProgram& operator=(const LinearProgram&) = delete;

  /// `entries` are coefficients on already existing columns.
  int add_row(RowSense sense, double rhs, std::span<const Entry> entries = {});
  /// `entries` are coefficients on already existing rows.
  int add_column(double cost, std::span<const Entry> entries);

  void set_cost(int column, double cost);
  double cost(int column) const;

  int num_rows() const;
  int num_columns() const;

  Status solve(long max_iterations = 1'000'000);

  double objective() const;
  double value(int column) const;
  std::vector<double> values() const;
  double dual(int row) const;
  std::vector<double> duals() const;
  double reduced_cost(int column) const;

  // Discards the basis; the next solve starts from the all-artificial basis.
  void reset_basis();

  const SolveStats& stats() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vrpsd::lp
