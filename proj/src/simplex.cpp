#include "dpsignal/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace dpsignal {
namespace {

// Full tableau: rows 0..m-1 hold B^{-1}[A | I_art | b], row m holds reduced
// costs and the negated objective value. Column layout: n original columns,
// then m artificial columns, then the rhs.
class Tableau {
 public:
  Tableau(const LinearProgram& lp, double tol)
      : m_(lp.m), n_(lp.n), cols_(lp.n + lp.m + 1), tol_(tol),
        t_((lp.m + 1) * (lp.n + lp.m + 1), 0.0), basis_(lp.m) {
    for (std::size_t i = 0; i < m_; ++i) {
      const double sign = lp.b[i] < 0.0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < n_; ++j) at(i, j) = sign * lp.at(i, j);
      at(i, n_ + i) = 1.0;
      rhs(i) = sign * lp.b[i];
      basis_[i] = static_cast<int>(n_ + i);
    }
  }

  double& at(std::size_t i, std::size_t j) { return t_[i * cols_ + j]; }
  double& rhs(std::size_t i) { return t_[i * cols_ + cols_ - 1]; }
  double& cost(std::size_t j) { return t_[m_ * cols_ + j]; }
  double objective() { return -t_[m_ * cols_ + cols_ - 1]; }
  int basis(std::size_t i) const { return basis_[i]; }
  bool artificial(int j) const { return j >= static_cast<int>(n_); }

  void pivot(std::size_t row, std::size_t col) {
    const double p = at(row, col);
    for (std::size_t j = 0; j < cols_; ++j) t_[row * cols_ + j] /= p;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == row) continue;
      const double f = t_[i * cols_ + col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) {
        t_[i * cols_ + j] -= f * t_[row * cols_ + j];
      }
      t_[i * cols_ + col] = 0.0;
    }
    basis_[row] = static_cast<int>(col);
  }

  // Bland primal iterations on the current cost row, entering columns below
  // col_limit only. Returns false if an improving column is unbounded.
  bool iterate(std::size_t col_limit) {
    const std::size_t cap = 50000 + 200 * (m_ + cols_);
    for (std::size_t iter = 0; iter < cap; ++iter) {
      std::size_t enter = col_limit;
      for (std::size_t j = 0; j < col_limit; ++j) {
        if (cost(j) > tol_) {
          enter = j;
          break;
        }
      }
      if (enter == col_limit) return true;  // optimal
      std::size_t leave = m_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = at(i, enter);
        if (a <= tol_) continue;
        const double ratio = rhs(i) / a;
        if (ratio < best - tol_ ||
            (ratio <= best + tol_ && (leave == m_ || basis_[i] < basis_[leave]))) {
          best = std::min(best, ratio);
          leave = i;
        }
      }
      if (leave == m_) return false;  // unbounded direction
      pivot(leave, enter);
    }
    throw std::runtime_error("simplex iteration cap exceeded");
  }

  // Replaces basic artificials by original columns where possible. Rows
  // that keep an artificial are redundant: numerically zero across the
  // original columns, and they stay zero under later pivots.
  void drive_out_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (!artificial(basis_[i])) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (std::abs(at(i, j)) > tol_) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  void load_phase1_costs() {
    for (std::size_t j = 0; j < cols_; ++j) cost(j) = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) cost(j) += at(i, j);
      cost(cols_ - 1) += rhs(i);
    }
  }

  void load_phase2_costs(const std::vector<double>& c) {
    for (std::size_t j = 0; j < cols_; ++j) cost(j) = 0.0;
    for (std::size_t j = 0; j < n_; ++j) cost(j) = c[j];
    for (std::size_t i = 0; i < m_; ++i) {
      const int bj = basis_[i];
      const double cb = artificial(bj) ? 0.0 : c[bj];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) {
        t_[m_ * cols_ + j] -= cb * t_[i * cols_ + j];
      }
    }
    // Basic columns are unit vectors; force their reduced costs to zero.
    for (std::size_t i = 0; i < m_; ++i) cost(basis_[i]) = 0.0;
  }

 private:
  std::size_t m_, n_, cols_;
  double tol_;
  std::vector<double> t_;
  std::vector<int> basis_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, double tol) {
  if (lp.a.size() != lp.m * lp.n || lp.b.size() != lp.m || lp.c.size() != lp.n) {
    throw std::invalid_argument("linear program dimensions are inconsistent");
  }
  LpSolution out;
  if (lp.m == 0) {
    for (std::size_t j = 0; j < lp.n; ++j) {
      if (lp.c[j] > tol) {
        out.status = LpStatus::kUnbounded;
        return out;
      }
    }
    out.status = LpStatus::kOptimal;
    out.x.assign(lp.n, 0.0);
    out.objective = 0.0;
    return out;
  }

  Tableau tab(lp, tol);
  tab.load_phase1_costs();
  tab.iterate(lp.n + lp.m);  // phase-1 objective is bounded above by zero
  if (tab.objective() < -tol * (1.0 + static_cast<double>(lp.m))) {
    out.status = LpStatus::kInfeasible;
    return out;
  }
  tab.drive_out_artificials();

  tab.load_phase2_costs(lp.c);
  if (!tab.iterate(lp.n)) {
    out.status = LpStatus::kUnbounded;
    return out;
  }

  out.status = LpStatus::kOptimal;
  out.x.assign(lp.n, 0.0);
  out.basis.resize(lp.m);
  for (std::size_t i = 0; i < lp.m; ++i) {
    out.basis[i] = tab.basis(i);
    if (!tab.artificial(tab.basis(i))) {
      out.x[tab.basis(i)] = std::max(0.0, tab.rhs(i));
    }
  }
  double obj = 0.0;
  for (std::size_t j = 0; j < lp.n; ++j) obj += lp.c[j] * out.x[j];
  out.objective = obj;
  return out;
}

}  // namespace dpsignal
