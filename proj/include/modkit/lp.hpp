#pragma once

#include <memory>
#include <string>
#include <vector>

namespace modkit {

enum class RowSense { le, ge, eq };
enum class LpStatus { optimal, infeasible, unbounded, iteration_limit, numerical_failure };

std::string to_string(LpStatus s);

/// Dense constraint row: coeffs . x (sense) rhs.
struct LpRow {
  std::vector<double> coeffs;
  RowSense sense = RowSense::le;
  double rhs = 0.0;
};

/// minimize objective . x subject to rows; variables are >= 0 unless marked free.
struct LpProblem {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<char> free_var;
  std::vector<LpRow> rows;

  explicit LpProblem(int vars = 0)
      : num_vars(vars), objective(static_cast<std::size_t>(vars), 0.0), free_var(static_cast<std::size_t>(vars), 0) {}

  void add_row(std::vector<double> coeffs, RowSense sense, double rhs) {
    rows.push_back({std::move(coeffs), sense, rhs});
  }
};

struct LpOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  int max_iterations = 200000;
  int refactor_every = 50;
};

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;
  /// d(objective)/d(rhs) per original row.
  std::vector<double> duals;
  double objective = 0.0;
  int iterations = 0;
};

/// Two-phase dense revised simplex with Bland's rule.
///
/// The instance keeps its basis between calls, so a new objective can be
/// optimized from the previous vertex, and single pivots can walk to a
/// neighbouring vertex.
class Simplex {
 public:
  explicit Simplex(const LpProblem& problem, LpOptions options = {});
  ~Simplex();
  Simplex(Simplex&&) noexcept;
  Simplex& operator=(Simplex&&) noexcept;

  /// Full solve from the slack/artificial basis.
  LpResult solve();
  /// Phase 2 from the current (primal feasible) basis under a new objective.
  LpResult reoptimize(const std::vector<double>& objective);

  /// Internal (standard-form) column count and basis.
  int num_columns() const;
  std::vector<int> basis() const;
  void restore_basis(const std::vector<int>& basis);
  /// Structural columns that are nonbasic and allowed to enter.
  std::vector<int> entering_candidates() const;
  /// Pivot `column` into the basis via the ratio test. False if the edge is unbounded.
  bool pivot_in(int column);
  /// Solution at the current basis.
  LpResult current() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

LpResult solve_lp(const LpProblem& problem, LpOptions options = {});

}  // namespace modkit
