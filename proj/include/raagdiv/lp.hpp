#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <utility>
#include <vector>

namespace raagdiv::lp {

/// min cost·x  subject to  A x = rhs,  x >= 0, exact rationals throughout.
struct Problem {
  std::size_t num_vars = 0;
  std::vector<std::vector<std::pair<std::size_t, mpq_class>>> rows;
  std::vector<mpq_class> rhs;
  std::vector<mpq_class> cost;

  /// Appends x_var <= bound (upper) or x_var >= bound (lower) through a new
  /// slack variable with zero cost.
  void add_bound(std::size_t var, const mpq_class& bound, bool upper);
};

enum class Status { optimal, infeasible, unbounded, budget_exceeded };

struct Solution {
  Status status = Status::infeasible;
  mpq_class objective;
  std::vector<mpq_class> x;
  /// Phase-one optimum; positive exactly when the system is infeasible.
  mpq_class infeasibility;
  std::size_t pivots = 0;
};

/// Two-phase primal simplex on a sparse-row tableau. Dantzig pricing,
/// switching to Bland's rule after a run of degenerate pivots so the method
/// terminates.
Solution solve_lp(const Problem& p, std::size_t pivot_budget);

struct IntegerSolution {
  Status status = Status::infeasible;
  /// True when the incumbent is proven optimal.
  bool proven = false;
  mpq_class objective;          // incumbent objective (if any)
  std::vector<mpz_class> x;     // incumbent
  mpq_class lp_bound;           // root relaxation value
  bool lp_feasible = false;     // root relaxation was feasible
  std::size_t nodes = 0;
  std::size_t pivots = 0;
};

/// Depth-first branch and bound on the most fractional variable, with a
/// rounding heuristic for incumbents. Every variable is integer.
IntegerSolution solve_ilp(const Problem& p, std::size_t pivot_budget, std::size_t node_budget);

}  // namespace raagdiv::lp
