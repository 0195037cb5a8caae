#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "nsmac/channel.hpp"
#include "nsmac/classical.hpp"
#include "nsmac/lp/solve.hpp"
#include "nsmac/orbits.hpp"

namespace nsmac {

enum class Program { NonSignaling, Relaxed };

/// Variable layout of the non-signaling programs: blocks r, r1, r2 over triples, then p over pairs.
struct NsLayout {
  int triples = 0, pairs = 0;
  int r(int w) const { return w; }
  int r1(int w) const { return triples + w; }
  int r2(int w) const { return 2 * triples + w; }
  int p(int u) const { return 3 * triples + u; }
  int num_vars() const { return 3 * triples + pairs; }
};

/// Variable layout of the relaxed programs: r over triples, then p over pairs.
struct RelaxedLayout {
  int triples = 0, pairs = 0;
  int r(int w) const { return w; }
  int p(int u) const { return triples + u; }
  int num_vars() const { return triples + pairs; }
};

/// Element-level non-signaling program on a single channel (triples indexed (x1*nx2+x2)*ny+y).
template <class Scalar>
LinearProgram<Scalar> build_ns_lp_element(const BasicChannel<Scalar>& w, int k1, int k2,
                                          Objective objective = Objective::Joint);

/// Orbit-reduced non-signaling program for n copies of w.
template <class Scalar>
LinearProgram<Scalar> build_ns_lp_orbit(const BasicChannel<Scalar>& w, const MacOrbits& orbits, int k1, int k2,
                                        Objective objective = Objective::Joint);

/// Equivalent orbit program in the variables (r, b1 = r1 - r, b2 = r2 - r, p): the four
/// ordering rows per orbit become nonnegativity bounds and one row per orbit remains.
/// Used for solving; the optimum and the primal map back one-to-one.
template <class Scalar>
LinearProgram<Scalar> build_ns_lp_orbit_compact(const BasicChannel<Scalar>& w, const MacOrbits& orbits, int k1, int k2,
                                                Objective objective = Objective::Joint);

template <class Scalar>
LinearProgram<Scalar> build_relaxed_lp_element(const BasicChannel<Scalar>& w, int k1, int k2);

template <class Scalar>
LinearProgram<Scalar> build_relaxed_lp_orbit(const BasicChannel<Scalar>& w, const MacOrbits& orbits, int k1, int k2);

/// Either program at orbit level.
template <class Scalar>
LinearProgram<Scalar> build_program(Program program, const BasicChannel<Scalar>& w, const MacOrbits& orbits, int k1,
                                    int k2) {
  return program == Program::NonSignaling ? build_ns_lp_orbit(w, orbits, k1, k2)
                                          : build_relaxed_lp_orbit(w, orbits, k1, k2);
}

/// Orbit-indexed symmetrized strategy; at n = 1 orbits coincide with elements.
struct NsCode {
  int nx1 = 0, nx2 = 0, ny = 0;
  int n = 0, k1 = 0, k2 = 0;
  std::uint64_t channel_hash = 0;
  double value = 0;
  std::vector<double> r, r1, r2, p;
};

struct NsResult {
  LpStatus status = LpStatus::IterationLimit;
  double value = 0;
  NsCode code;
  long iterations = 0;
  int num_vars = 0, num_rows = 0;
};

NsCode extract_code(const Channel& w, const MacOrbits& orbits, int k1, int k2, const std::vector<double>& primal);

/// Primal of the compact program mapped to the NsLayout of the orbit program.
std::vector<double> expand_compact_primal(const std::vector<double>& compact, int triples, int pairs);

/// S^NS(W^{⊗n}, k1, k2) via the orbit program in double precision.
NsResult solve_ns(const Channel& w, int n, int k1, int k2, const SolveOptions& options = default_solve_options(),
                  Objective objective = Objective::Joint);
NsResult solve_ns(const Channel& w, const MacOrbits& orbits, int k1, int k2,
                  const SolveOptions& options = default_solve_options(), Objective objective = Objective::Joint);

/// Decides whether the program value equals 1, exactly or within tol in floating point.
CertifyResult certify_program(Program program, const ExactChannel& w, const MacOrbits& orbits, int k1, int k2,
                              SolveMode mode, double tol = 1e-7,
                              const SolveOptions& options = default_solve_options());

/// S^NSbar(W^{⊗n}, k1, k2) via the orbit relaxed program in double precision.
LpSolution<double> solve_relaxed(const Channel& w, const MacOrbits& orbits, int k1, int k2,
                                 const SolveOptions& options = default_solve_options());

/// Largest residual of the orbit program's constraints at the code's values.
double code_residual(const Channel& w, const MacOrbits& orbits, const NsCode& code);

std::string serialize_code(const NsCode& code);
NsCode parse_code(const std::string& text);

/// Explicit tripartite box P(x1 x2 (j1 j2) | i1 i2 y) over the n-fold channel alphabets.
struct Box {
  int nx1 = 0, nx2 = 0, ny = 0, k1 = 0, k2 = 0;
  std::vector<double> data;
  std::size_t index(int x1, int x2, int j1, int j2, int i1, int i2, int y) const {
    return ((((((std::size_t(i1) * k2 + i2) * ny + y) * nx1 + x1) * nx2 + x2) * k1 + j1) * k2 + j2);
  }
  double operator()(int x1, int x2, int j1, int j2, int i1, int i2, int y) const {
    return data[index(x1, x2, j1, j2, i1, i2, y)];
  }
};

inline constexpr std::size_t kDefaultBoxBudget = 50'000'000;

/// Element values r, r1, r2 (by triple of the n-fold channel) and p (by pair) from a code.
struct ElementCode {
  int nx1 = 0, nx2 = 0, ny = 0;
  std::vector<double> r, r1, r2, p;
};
ElementCode desymmetrize(const NsCode& code, std::size_t budget = kDefaultBoxBudget);

Box reconstruct_box(const NsCode& code, std::size_t budget = kDefaultBoxBudget);

struct BoxReport {
  double normalization = 0;  // max |sum - 1| over inputs
  double ns_receiver = 0;    // P(x1 x2 | i1 i2 y) varying with y
  double ns_sender1 = 0;     // P(x2, j | i1 i2 y) varying with i1
  double ns_sender2 = 0;     // P(x1, j | i1 i2 y) varying with i2
  double min_entry = 0;
  double success = 0;
  double max_ns_residual() const { return std::max({ns_receiver, ns_sender1, ns_sender2}); }
};

/// Checks a box against the n-fold channel `wn`.
BoxReport check_box(const Box& box, const Channel& wn);

struct IndepNsStrategy {
  int k1 = 0, k2 = 0;
  std::vector<double> r1, p1, r2, p2;  // r1[x1 * ny + y], p1[x1], r2[x2 * ny + y], p2[x2]
  double value = 0;
};

double indep_ns_value(const Channel& w, const IndepNsStrategy& s);

/// Lower bound on the independent-NS sum success by alternating linear programs.
IndepNsStrategy indep_ns_sum(const Channel& w, int k1, int k2, int restarts = 4, double tol = 1e-9);

struct NssrReport {
  double factor = 0;
  double indep_lower_bound = 0;
  double lhs = 0;
  double rhs = 0;
  bool holds = false;
};

double nssr_factor(int k, int l);

NssrReport check_nssr_inequality(const Channel& w, int k1, int k2, int l1, int l2, int restarts = 4);

}  // namespace nsmac
