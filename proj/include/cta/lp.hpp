#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "cta/common.hpp"

namespace cta {

struct SimplexOptions {
  double tol = 1e-11;          // optimality / feasibility tolerance
  double pivot_tol = 1e-10;    // smallest acceptable pivot element
  long max_iterations = 0;     // 0 = automatic from problem size
  int bland_trigger = 64;      // degenerate steps before Bland's rule kicks in
};

struct SimplexResult {
  std::vector<double> x;
  double objective = 0.0;
  std::vector<double> duals;  // row multipliers y with reduced costs c - y A
  long iterations = 0;
};

/// Dense two-phase tableau simplex for the standard form
///   min c.x  s.t.  A x = b,  x >= 0.
/// Pricing is Dantzig with a lowest-index (Bland) fallback once pivots go
/// degenerate, which keeps the iteration deterministic and cycle-free.
class DenseSimplex {
 public:
  DenseSimplex(std::vector<std::vector<double>> columns, std::vector<double> b,
               std::vector<double> cost, SimplexOptions opt = {})
      : m_(static_cast<int>(b.size())),
        n_(static_cast<int>(columns.size())),
        opt_(opt) {
    require(static_cast<int>(cost.size()) == n_, "DenseSimplex: cost size");
    for (const auto& col : columns)
      require(static_cast<int>(col.size()) == m_, "DenseSimplex: column size");
    // Tableau columns: n structural + m artificial + rhs.
    total_ = n_ + m_;
    tab_.assign(static_cast<std::size_t>(m_) * (total_ + 1), 0.0);
    cost_ = std::move(cost);
    cost_.resize(static_cast<std::size_t>(total_), 0.0);
    for (int j = 0; j < n_; ++j)
      for (int i = 0; i < m_; ++i) at(i, j) = columns[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    for (int i = 0; i < m_; ++i) {
      double rhs = b[static_cast<std::size_t>(i)];
      if (rhs < 0) {
        rhs = -rhs;
        for (int j = 0; j < n_; ++j) at(i, j) = -at(i, j);
      }
      at(i, total_) = rhs;
      at(i, n_ + i) = 1.0;
    }
    basis_.resize(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) basis_[static_cast<std::size_t>(i)] = n_ + i;
  }

  SimplexResult solve() {
    const long cap = opt_.max_iterations > 0
                         ? opt_.max_iterations
                         : 200L * (m_ + n_) + 20000L;
    // Phase 1: minimize the artificial mass.
    std::vector<double> d(static_cast<std::size_t>(total_), 0.0);
    double dz = 0.0;
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < total_; ++j) d[static_cast<std::size_t>(j)] -= at(i, j);
      dz -= at(i, total_);
    }
    for (int i = n_; i < total_; ++i) d[static_cast<std::size_t>(i)] = 0.0;
    iterate(d, dz, cap, /*phase1=*/true);
    if (dz < -phase1_tol())
      throw Infeasible("simplex: phase 1 left artificial mass " +
                       std::to_string(-dz));
    pivot_out_artificials();
    // Phase 2: real costs, artificial columns barred.
    d.assign(static_cast<std::size_t>(total_), 0.0);
    dz = 0.0;
    for (int j = 0; j < n_; ++j) d[static_cast<std::size_t>(j)] = cost_[static_cast<std::size_t>(j)];
    for (int i = 0; i < m_; ++i) {
      const int bj = basis_[static_cast<std::size_t>(i)];
      const double cb = cost_[static_cast<std::size_t>(bj)];
      if (cb == 0.0) continue;
      for (int j = 0; j < total_; ++j) d[static_cast<std::size_t>(j)] -= cb * at(i, j);
      dz -= cb * at(i, total_);
    }
    iterate(d, dz, cap, /*phase1=*/false);

    SimplexResult res;
    res.x.assign(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < m_; ++i)
      if (basis_[static_cast<std::size_t>(i)] < n_)
        res.x[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = at(i, total_);
    res.objective = -dz_final_;
    res.duals.assign(static_cast<std::size_t>(m_), 0.0);
    // Reduced cost of artificial column i is -y_i.
    for (int i = 0; i < m_; ++i)
      res.duals[static_cast<std::size_t>(i)] = -d_final_[static_cast<std::size_t>(n_ + i)];
    res.iterations = iterations_;
    return res;
  }

 private:
  double& at(int i, int j) { return tab_[static_cast<std::size_t>(i) * (total_ + 1) + j]; }
  double at(int i, int j) const { return tab_[static_cast<std::size_t>(i) * (total_ + 1) + j]; }
  double phase1_tol() const { return opt_.tol * (1.0 + std::abs(rhs_scale_)); }

  void iterate(std::vector<double>& d, double& dz, long cap, bool phase1) {
    rhs_scale_ = 0.0;
    for (int i = 0; i < m_; ++i) rhs_scale_ = std::max(rhs_scale_, at(i, total_));
    int stall = 0;
    while (true) {
      if (++iterations_ > cap) throw IterationLimit("simplex: iteration cap hit");
      const bool bland = stall >= opt_.bland_trigger;
      int enter = -1;
      double best = -opt_.tol;
      for (int j = 0; j < total_; ++j) {
        if (!phase1 && j >= n_) continue;  // artificials barred in phase 2
        const double rc = d[static_cast<std::size_t>(j)];
        if (rc < best) {
          if (bland) {
            enter = j;
            break;
          }
          best = rc;
          enter = j;
        }
      }
      if (enter < 0) break;  // optimal
      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        const double aij = at(i, enter);
        if (aij > opt_.pivot_tol) {
          const double ratio = at(i, total_) / aij;
          if (ratio < best_ratio - 1e-15 ||
              (ratio < best_ratio + 1e-15 && leave >= 0 &&
               basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) {
        if (phase1) throw Infeasible("simplex: phase 1 unbounded (bad data)");
        throw Unbounded("simplex: objective unbounded below");
      }
      if (best_ratio <= opt_.tol)
        ++stall;
      else
        stall = 0;
      pivot(leave, enter, d, dz);
    }
    d_final_ = d;
    dz_final_ = dz;
  }

  void pivot(int row, int col, std::vector<double>& d, double& dz) {
    const double inv = 1.0 / at(row, col);
    for (int j = 0; j <= total_; ++j) at(row, j) *= inv;
    at(row, col) = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double factor = at(i, col);
      if (factor == 0.0) continue;
      for (int j = 0; j <= total_; ++j) at(i, j) -= factor * at(row, j);
      at(i, col) = 0.0;
    }
    const double dfac = d[static_cast<std::size_t>(col)];
    if (dfac != 0.0) {
      for (int j = 0; j < total_; ++j) d[static_cast<std::size_t>(j)] -= dfac * at(row, j);
      dz -= dfac * at(row, total_);
      d[static_cast<std::size_t>(col)] = 0.0;
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  /// After phase 1, swap any artificial still sitting (at zero level) in
  /// the basis for a structural column when one is available.
  void pivot_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < n_) continue;
      int col = -1;
      for (int j = 0; j < n_; ++j)
        if (std::abs(at(i, j)) > 1e2 * opt_.pivot_tol) {
          col = j;
          break;
        }
      if (col < 0) continue;  // redundant row; keep the artificial at zero
      std::vector<double> dummy(static_cast<std::size_t>(total_), 0.0);
      double dzd = 0.0;
      pivot(i, col, dummy, dzd);
    }
  }

  int m_, n_, total_;
  SimplexOptions opt_;
  std::vector<double> tab_;
  std::vector<double> cost_;
  std::vector<int> basis_;
  std::vector<double> d_final_;
  double dz_final_ = 0.0;
  double rhs_scale_ = 0.0;
  long iterations_ = 0;
};

enum class Relation { LessEq, GreaterEq, Equal };

/// General small LP over free variables:
///   min c.x  s.t. rows of (a, rel, rhs).
/// Converted to standard form by variable splitting plus slacks. Intended
/// for modest systems; the minimax drivers build their dual programs in
/// standard form directly.
class LinearProgram {
 public:
  explicit LinearProgram(int num_vars) : nv_(num_vars) {
    require(num_vars >= 1, "LinearProgram: need at least one variable");
    objective_.assign(static_cast<std::size_t>(num_vars), 0.0);
  }

  void set_objective(std::vector<double> c) {
    require(static_cast<int>(c.size()) == nv_, "LinearProgram: objective size");
    objective_ = std::move(c);
  }

  void add_constraint(std::vector<double> a, Relation rel, double rhs) {
    require(static_cast<int>(a.size()) == nv_, "LinearProgram: row size");
    rows_.push_back({std::move(a), rel, rhs});
  }

  SimplexResult minimize(SimplexOptions opt = {}) const {
    const int m = static_cast<int>(rows_.size());
    int slacks = 0;
    for (const auto& r : rows_)
      if (r.rel != Relation::Equal) ++slacks;
    const int cols = 2 * nv_ + slacks;
    std::vector<std::vector<double>> columns(
        static_cast<std::size_t>(cols),
        std::vector<double>(static_cast<std::size_t>(m), 0.0));
    std::vector<double> b(static_cast<std::size_t>(m), 0.0);
    std::vector<double> cost(static_cast<std::size_t>(cols), 0.0);
    for (int v = 0; v < nv_; ++v) {
      cost[static_cast<std::size_t>(2 * v)] = objective_[static_cast<std::size_t>(v)];
      cost[static_cast<std::size_t>(2 * v + 1)] = -objective_[static_cast<std::size_t>(v)];
    }
    int slack = 2 * nv_;
    for (int i = 0; i < m; ++i) {
      const auto& r = rows_[static_cast<std::size_t>(i)];
      for (int v = 0; v < nv_; ++v) {
        columns[static_cast<std::size_t>(2 * v)][static_cast<std::size_t>(i)] = r.a[static_cast<std::size_t>(v)];
        columns[static_cast<std::size_t>(2 * v + 1)][static_cast<std::size_t>(i)] = -r.a[static_cast<std::size_t>(v)];
      }
      b[static_cast<std::size_t>(i)] = r.rhs;
      if (r.rel == Relation::LessEq)
        columns[static_cast<std::size_t>(slack++)][static_cast<std::size_t>(i)] = 1.0;
      else if (r.rel == Relation::GreaterEq)
        columns[static_cast<std::size_t>(slack++)][static_cast<std::size_t>(i)] = -1.0;
    }
    DenseSimplex solver(std::move(columns), std::move(b), std::move(cost), opt);
    SimplexResult std_res = solver.solve();
    SimplexResult res;
    res.objective = std_res.objective;
    res.iterations = std_res.iterations;
    res.duals = std_res.duals;
    res.x.assign(static_cast<std::size_t>(nv_), 0.0);
    for (int v = 0; v < nv_; ++v)
      res.x[static_cast<std::size_t>(v)] = std_res.x[static_cast<std::size_t>(2 * v)] -
                                           std_res.x[static_cast<std::size_t>(2 * v + 1)];
    return res;
  }

 private:
  struct Row {
    std::vector<double> a;
    Relation rel;
    double rhs;
  };
  int nv_;
  std::vector<double> objective_;
  std::vector<Row> rows_;
};

}  // namespace cta
