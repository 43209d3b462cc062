#pragma once

// Dense two-phase primal simplex for small linear programs in standard
// equality form:
//
//   maximize    c'x
//   subject to  A x = b,  x >= 0
//
// Bland's smallest-index pivot rule throughout, so the method terminates on
// degenerate programs. Intended for the small dense systems that arise in
// disclosure design (tens of rows, hundreds of columns); no sparsity, no
// factorization reuse.

#include <cstddef>
#include <vector>

namespace dpsignal {

// Row-major dense standard-form program. a has m*n entries, b has m, c has n.
struct LinearProgram {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;

  double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;      // primal solution, size n (optimal only)
  std::vector<int> basis;     // basic column per row, size m (optimal only)
};

// Solves the program. Rows with negative b are negated up front; a phase-1
// auxiliary program finds a feasible basis, phase 2 optimizes c'x. The
// returned x is a basic solution: at most m entries are nonzero and the
// basic columns are linearly independent.
LpSolution solve_lp(const LinearProgram& lp, double tol = 1e-9);

}  // namespace dpsignal
