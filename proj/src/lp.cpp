#include "modkit/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace modkit {

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
    case LpStatus::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

namespace {
enum class ColKind : char { structural, slack, artificial };
}  // namespace

struct Simplex::Impl {
  LpOptions opt;
  int m = 0;
  int nvars = 0;
  int ncols = 0;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  std::vector<double> row_sign;
  std::vector<ColKind> kind;
  std::vector<int> col_var;
  std::vector<double> col_sign;
  Eigen::VectorXd cost;  // phase 2 cost per column

  std::vector<int> basis;
  std::vector<char> in_basis;
  Eigen::MatrixXd Binv;
  Eigen::VectorXd xB;
  int since_refactor = 0;
  bool phase1_done = false;
  bool feasible = false;

  void build(const LpProblem& p) {
    m = static_cast<int>(p.rows.size());
    nvars = p.num_vars;
    if (static_cast<int>(p.objective.size()) != nvars || static_cast<int>(p.free_var.size()) != nvars) {
      throw std::invalid_argument("objective/free flags must have one entry per variable");
    }
    // Structural columns: one per nonnegative variable, two per free variable.
    for (int j = 0; j < nvars; ++j) {
      kind.push_back(ColKind::structural);
      col_var.push_back(j);
      col_sign.push_back(1.0);
      if (p.free_var[static_cast<std::size_t>(j)]) {
        kind.push_back(ColKind::structural);
        col_var.push_back(j);
        col_sign.push_back(-1.0);
      }
    }
    const int nstruct = static_cast<int>(kind.size());
    std::vector<RowSense> sense(static_cast<std::size_t>(m));
    row_sign.assign(static_cast<std::size_t>(m), 1.0);
    b.resize(m);
    for (int i = 0; i < m; ++i) {
      const auto& row = p.rows[static_cast<std::size_t>(i)];
      if (static_cast<int>(row.coeffs.size()) != nvars) throw std::invalid_argument("row width mismatch");
      RowSense s = row.sense;
      double rhs = row.rhs;
      if (rhs < 0) {
        row_sign[static_cast<std::size_t>(i)] = -1.0;
        rhs = -rhs;
        if (s == RowSense::le) {
          s = RowSense::ge;
        } else if (s == RowSense::ge) {
          s = RowSense::le;
        }
      }
      sense[static_cast<std::size_t>(i)] = s;
      b(i) = rhs;
    }
    int nslack = 0;
    int nart = 0;
    for (auto s : sense) {
      if (s != RowSense::eq) ++nslack;
      if (s != RowSense::le) ++nart;
    }
    ncols = nstruct + nslack + nart;
    A = Eigen::MatrixXd::Zero(m, ncols);
    for (int i = 0; i < m; ++i) {
      const auto& row = p.rows[static_cast<std::size_t>(i)];
      for (int c = 0; c < nstruct; ++c) {
        A(i, c) = row_sign[static_cast<std::size_t>(i)] * col_sign[static_cast<std::size_t>(c)] *
                  row.coeffs[static_cast<std::size_t>(col_var[static_cast<std::size_t>(c)])];
      }
    }
    basis.assign(static_cast<std::size_t>(m), -1);
    int col = nstruct;
    for (int i = 0; i < m; ++i) {
      const auto s = sense[static_cast<std::size_t>(i)];
      if (s == RowSense::eq) continue;
      kind.push_back(ColKind::slack);
      col_var.push_back(-1);
      col_sign.push_back(1.0);
      A(i, col) = s == RowSense::le ? 1.0 : -1.0;
      if (s == RowSense::le) basis[static_cast<std::size_t>(i)] = col;
      ++col;
    }
    for (int i = 0; i < m; ++i) {
      if (sense[static_cast<std::size_t>(i)] == RowSense::le) continue;
      kind.push_back(ColKind::artificial);
      col_var.push_back(-1);
      col_sign.push_back(1.0);
      A(i, col) = 1.0;
      basis[static_cast<std::size_t>(i)] = col;
      ++col;
    }
    set_objective(p.objective);
    reset_basis_flags();
    Binv = Eigen::MatrixXd::Identity(m, m);
    xB = b;
    since_refactor = 0;
  }

  void set_objective(const std::vector<double>& obj) {
    if (static_cast<int>(obj.size()) != nvars) throw std::invalid_argument("objective width mismatch");
    cost = Eigen::VectorXd::Zero(ncols);
    for (int c = 0; c < ncols; ++c) {
      if (kind[static_cast<std::size_t>(c)] == ColKind::structural) {
        cost(c) = col_sign[static_cast<std::size_t>(c)] * obj[static_cast<std::size_t>(col_var[static_cast<std::size_t>(c)])];
      }
    }
  }

  void reset_basis_flags() {
    in_basis.assign(static_cast<std::size_t>(ncols), 0);
    for (int c : basis) in_basis[static_cast<std::size_t>(c)] = 1;
  }

  void refactor() {
    if (m == 0) return;
    Eigen::MatrixXd B(m, m);
    for (int i = 0; i < m; ++i) B.col(i) = A.col(basis[static_cast<std::size_t>(i)]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    Binv = lu.inverse();
    xB = Binv * b;
    // One step of iterative refinement.
    const Eigen::VectorXd r = b - B * xB;
    xB += Binv * r;
    for (int i = 0; i < m; ++i) {
      if (std::abs(xB(i)) < opt.feasibility_tol) xB(i) = 0.0;
    }
    since_refactor = 0;
  }

  void pivot(int r, int j, const Eigen::VectorXd& a) {
    const double ar = a(r);
    const Eigen::RowVectorXd pr = Binv.row(r) / ar;
    const double xr = xB(r) / ar;
    Binv.noalias() -= a * pr;
    Binv.row(r) = pr;
    xB -= a * xr;
    xB(r) = xr;
    for (int i = 0; i < m; ++i) {
      if (xB(i) < 0 && xB(i) > -opt.feasibility_tol) xB(i) = 0.0;
    }
    in_basis[static_cast<std::size_t>(basis[static_cast<std::size_t>(r)])] = 0;
    basis[static_cast<std::size_t>(r)] = j;
    in_basis[static_cast<std::size_t>(j)] = 1;
    if (++since_refactor >= opt.refactor_every) refactor();
  }

  /// Min-ratio leaving row for entering column direction a; ties to the smallest basic index.
  int ratio_test(const Eigen::VectorXd& a) const {
    int leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (a(i) <= opt.pivot_tol) continue;
      const double ratio = std::max(0.0, xB(i)) / a(i);
      if (leave < 0 || ratio < best - 1e-12) {
        best = ratio;
        leave = i;
      } else if (ratio <= best + 1e-12 && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)]) {
        leave = i;
        best = std::min(best, ratio);
      }
    }
    return leave;
  }

  bool may_enter(int c, bool allow_artificial) const {
    if (in_basis[static_cast<std::size_t>(c)]) return false;
    return allow_artificial || kind[static_cast<std::size_t>(c)] != ColKind::artificial;
  }

  LpStatus run(const Eigen::VectorXd& c, bool allow_artificial, int& iters) {
    Eigen::VectorXd cB(m);
    for (;;) {
      if (iters >= opt.max_iterations) return LpStatus::iteration_limit;
      for (int i = 0; i < m; ++i) cB(i) = c(basis[static_cast<std::size_t>(i)]);
      const Eigen::VectorXd y = Binv.transpose() * cB;
      int entering = -1;
      for (int j = 0; j < ncols; ++j) {
        if (!may_enter(j, allow_artificial)) continue;
        const double d = c(j) - y.dot(A.col(j));
        if (d < -opt.optimality_tol) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return LpStatus::optimal;
      const Eigen::VectorXd a = Binv * A.col(entering);
      const int leave = ratio_test(a);
      if (leave < 0) return LpStatus::unbounded;
      pivot(leave, entering, a);
      ++iters;
    }
  }

  /// Phase 1; leaves a feasible basis without artificials where possible.
  LpStatus phase1(int& iters) {
    Eigen::VectorXd c1 = Eigen::VectorXd::Zero(ncols);
    bool any = false;
    for (int j = 0; j < ncols; ++j) {
      if (kind[static_cast<std::size_t>(j)] == ColKind::artificial) {
        c1(j) = 1.0;
        any = true;
      }
    }
    phase1_done = true;
    if (!any) {
      feasible = true;
      return LpStatus::optimal;
    }
    const LpStatus st = run(c1, true, iters);
    if (st == LpStatus::iteration_limit) return st;
    refactor();
    double infeas = 0.0;
    for (int i = 0; i < m; ++i) {
      if (kind[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])] == ColKind::artificial) infeas += xB(i);
    }
    const double scale = 1.0 + (m > 0 ? b.cwiseAbs().maxCoeff() : 0.0);
    if (infeas > 1e-7 * scale) {
      feasible = false;
      return LpStatus::infeasible;
    }
    // Drive zero-level artificials out of the basis.
    for (int i = 0; i < m; ++i) {
      if (kind[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])] != ColKind::artificial) continue;
      const Eigen::RowVectorXd row = Binv.row(i);
      for (int j = 0; j < ncols; ++j) {
        if (!may_enter(j, false)) continue;
        const double e = row.dot(A.col(j));
        if (std::abs(e) > 1e-7) {
          const Eigen::VectorXd a = Binv * A.col(j);
          xB(i) = 0.0;
          pivot(i, j, a);
          break;
        }
      }
    }
    feasible = true;
    return LpStatus::optimal;
  }

  LpResult extract(LpStatus st, int iters, const std::vector<double>& objective) const {
    LpResult res;
    res.status = (Binv.allFinite() && xB.allFinite()) ? st : LpStatus::numerical_failure;
    res.iterations = iters;
    res.x.assign(static_cast<std::size_t>(nvars), 0.0);
    for (int i = 0; i < m; ++i) {
      const int c = basis[static_cast<std::size_t>(i)];
      if (kind[static_cast<std::size_t>(c)] != ColKind::structural) continue;
      res.x[static_cast<std::size_t>(col_var[static_cast<std::size_t>(c)])] += col_sign[static_cast<std::size_t>(c)] * xB(i);
    }
    res.objective = 0.0;
    for (int j = 0; j < nvars; ++j) res.objective += objective[static_cast<std::size_t>(j)] * res.x[static_cast<std::size_t>(j)];
    Eigen::VectorXd cB(m);
    for (int i = 0; i < m; ++i) cB(i) = cost(basis[static_cast<std::size_t>(i)]);
    const Eigen::VectorXd y = Binv.transpose() * cB;
    res.duals.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) res.duals[static_cast<std::size_t>(i)] = y(i) * row_sign[static_cast<std::size_t>(i)];
    return res;
  }

  std::vector<double> objective_vector() const {
    std::vector<double> obj(static_cast<std::size_t>(nvars), 0.0);
    for (int c = 0; c < ncols; ++c) {
      if (kind[static_cast<std::size_t>(c)] == ColKind::structural && col_sign[static_cast<std::size_t>(c)] > 0) {
        obj[static_cast<std::size_t>(col_var[static_cast<std::size_t>(c)])] = cost(c);
      }
    }
    return obj;
  }
};

Simplex::Simplex(const LpProblem& problem, LpOptions options) : impl_(std::make_unique<Impl>()) {
  impl_->opt = options;
  impl_->build(problem);
}

Simplex::~Simplex() = default;
Simplex::Simplex(Simplex&&) noexcept = default;
Simplex& Simplex::operator=(Simplex&&) noexcept = default;

LpResult Simplex::solve() {
  auto& s = *impl_;
  int iters = 0;
  const auto obj = s.objective_vector();
  const LpStatus p1 = s.phase1(iters);
  if (p1 != LpStatus::optimal) return s.extract(p1, iters, obj);
  const LpStatus st = s.run(s.cost, false, iters);
  s.refactor();
  return s.extract(st, iters, obj);
}

LpResult Simplex::reoptimize(const std::vector<double>& objective) {
  auto& s = *impl_;
  s.set_objective(objective);
  if (!s.phase1_done) return solve();
  int iters = 0;
  if (!s.feasible) return s.extract(LpStatus::infeasible, iters, objective);
  const LpStatus st = s.run(s.cost, false, iters);
  s.refactor();
  return s.extract(st, iters, objective);
}

int Simplex::num_columns() const { return impl_->ncols; }

std::vector<int> Simplex::basis() const { return impl_->basis; }

void Simplex::restore_basis(const std::vector<int>& basis) {
  auto& s = *impl_;
  if (static_cast<int>(basis.size()) != s.m) throw std::invalid_argument("basis size mismatch");
  s.basis = basis;
  s.reset_basis_flags();
  s.refactor();
}

std::vector<int> Simplex::entering_candidates() const {
  std::vector<int> out;
  for (int j = 0; j < impl_->ncols; ++j) {
    if (impl_->may_enter(j, false)) out.push_back(j);
  }
  return out;
}

bool Simplex::pivot_in(int column) {
  auto& s = *impl_;
  if (column < 0 || column >= s.ncols || !s.may_enter(column, false)) return false;
  const Eigen::VectorXd a = s.Binv * s.A.col(column);
  const int leave = s.ratio_test(a);
  if (leave < 0) return false;
  s.pivot(leave, column, a);
  return true;
}

LpResult Simplex::current() const {
  return impl_->extract(impl_->feasible ? LpStatus::optimal : LpStatus::infeasible, 0, impl_->objective_vector());
}

LpResult solve_lp(const LpProblem& problem, LpOptions options) {
  Simplex s(problem, options);
  return s.solve();
}

}  // namespace modkit
