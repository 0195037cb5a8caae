#pragma once

#include "nsmac/lp/linear_program.hpp"

namespace nsmac {

struct SimplexOptions {
  long iteration_limit = 50'000'000;
  int refactor_interval = 64;
  double primal_tol = 1e-9;
  double dual_tol = 1e-9;
  double pivot_tol = 1e-9;
  /// Consecutive degenerate pivots before switching to Bland's rule; negative means 5 * num_vars.
  long bland_stall = -1;
  /// Wall-clock limit in seconds (0 = none); reported as IterationLimit.
  double time_limit = 0;
  /// Progress line to stderr every this many iterations (0 = silent).
  long log_every = 0;
};

/// Bounded primal revised simplex. Tolerances are ignored in rational arithmetic.
template <class Scalar>
LpSolution<Scalar> simplex_solve(const LinearProgram<Scalar>& lp, const SimplexOptions& options = {},
                                 const LpBasis* warm_start = nullptr);

extern template LpSolution<double> simplex_solve(const LinearProgram<double>&, const SimplexOptions&, const LpBasis*);
extern template LpSolution<Rational> simplex_solve(const LinearProgram<Rational>&, const SimplexOptions&,
                                                   const LpBasis*);

}  // namespace nsmac
