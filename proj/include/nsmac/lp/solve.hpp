#pragma once

#include <iosfwd>
#include <string>

#include "nsmac/lp/linear_program.hpp"
#include "nsmac/lp/simplex.hpp"

namespace nsmac {

enum class SolveMode { Float, Exact };

struct SolveOptions {
  SimplexOptions simplex;
  /// Path of an external solver executable; empty means the bundled simplex.
  /// The executable is called as `solver <model.mps> <solution.txt>`.
  std::string external_solver;
};

/// Environment variable consulted by `default_solve_options` for the external solver path.
inline constexpr const char* kExternalSolverEnv = "NSMAC_LP_SOLVER";

SolveOptions default_solve_options();

/// Double-precision solve after removing fixed variables, empty columns and empty rows.
LpSolution<double> solve(const LinearProgram<double>& lp, const SolveOptions& options = {});

/// Exact solve: a double-precision pass supplies a starting basis, then all
/// further pivots run in rational arithmetic until optimality is proven.
LpSolution<Rational> solve(const LinearProgram<Rational>& lp, const SolveOptions& options = {});

enum class Certificate { CertifiedOne, BelowOne, CertifiedExactOne, SolverFailure };

std::string to_string(Certificate c);

struct CertifyResult {
  Certificate verdict = Certificate::SolverFailure;
  LpStatus status = LpStatus::IterationLimit;
  double value = 0;
  std::string exact_value;  // set in exact mode
  long iterations = 0;
};

/// Float mode: CertifiedOne iff value >= 1 - tol. Exact mode: CertifiedExactOne iff the value is 1.
CertifyResult check_value_is_one(const LinearProgram<Rational>& lp, SolveMode mode, double tol = 1e-7,
                                 const SolveOptions& options = {});
CertifyResult check_value_is_one(const LinearProgram<double>& lp, double tol = 1e-7,
                                 const SolveOptions& options = {});

/// Free-format MPS. Doubles are printed with round-trip precision; rationals as exact p/q tokens.
void write_mps(const LinearProgram<double>& lp, std::ostream& out);
void write_mps(const LinearProgram<Rational>& lp, std::ostream& out);

/// Runs the external solver on `lp`; statuses other than optimal carry no primal.
LpSolution<double> solve_external(const LinearProgram<double>& lp, const std::string& executable);

}  // namespace nsmac
