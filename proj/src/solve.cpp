#include "nsmac/lp/solve.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <unistd.h>

namespace nsmac {

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration-limit";
  }
  return "unknown";
}

std::string to_string(Certificate c) {
  switch (c) {
    case Certificate::CertifiedOne: return "certified_one";
    case Certificate::BelowOne: return "below_one";
    case Certificate::CertifiedExactOne: return "certified_exact_one";
    case Certificate::SolverFailure: return "solver_failure";
  }
  return "unknown";
}

SolveOptions default_solve_options() {
  SolveOptions o;
  if (const char* path = std::getenv(kExternalSolverEnv)) o.external_solver = path;
  return o;
}

namespace {

template <class Scalar>
struct Presolved {
  LinearProgram<Scalar> reduced;
  std::vector<int> kept;         // reduced column -> original column
  std::vector<Scalar> fixed;     // values of removed columns (by original index)
  std::vector<char> removed;
  bool decided = false;          // presolve alone determined the status
  LpStatus status = LpStatus::Optimal;
};

template <class Scalar>
Presolved<Scalar> presolve(const LinearProgram<Scalar>& lp) {
  Presolved<Scalar> ps;
  const int n = lp.num_vars();
  std::vector<int> nnz(n, 0);
  for (const auto& r : lp.rows())
    for (std::size_t t = 0; t < r.index.size(); ++t)
      if (r.value[t] != 0) ++nnz[r.index[t]];
  ps.fixed.assign(n, Scalar(0));
  ps.removed.assign(n, 0);
  std::vector<int> new_index(n, -1);
  for (int j = 0; j < n; ++j) {
    const auto& lo = lp.lower(j);
    const auto& hi = lp.upper(j);
    if (lo && hi && *lo == *hi) {
      ps.removed[j] = 1;
      ps.fixed[j] = *lo;
    } else if (nnz[j] == 0) {
      ps.removed[j] = 1;
      const int s = ScalarTraits<Scalar>::sign(lp.objective(j)) * (lp.maximize ? 1 : -1);
      if (s > 0) {
        if (!hi) ps.decided = true, ps.status = LpStatus::Unbounded;
        else ps.fixed[j] = *hi;
      } else if (s < 0) {
        if (!lo) ps.decided = true, ps.status = LpStatus::Unbounded;
        else ps.fixed[j] = *lo;
      } else {
        ps.fixed[j] = lo ? *lo : hi ? *hi : Scalar(0);
      }
    }
    if (!ps.removed[j]) {
      new_index[j] = ps.reduced.add_variable(lp.objective(j), lo, hi);
      ps.kept.push_back(j);
    }
  }
  ps.reduced.maximize = lp.maximize;
  ps.reduced.objective_offset = lp.objective_offset;
  for (int j = 0; j < n; ++j)
    if (ps.removed[j]) ps.reduced.objective_offset += lp.objective(j) * ps.fixed[j];
  for (const auto& r : lp.rows()) {
    LpRow<Scalar> out;
    out.relation = r.relation;
    out.rhs = r.rhs;
    for (std::size_t t = 0; t < r.index.size(); ++t) {
      const int j = r.index[t];
      if (r.value[t] == 0) continue;
      if (ps.removed[j]) {
        out.rhs -= r.value[t] * ps.fixed[j];
      } else {
        out.index.push_back(new_index[j]);
        out.value.push_back(r.value[t]);
      }
    }
    if (out.index.empty()) {
      const int s = ScalarTraits<Scalar>::sign(out.rhs);
      const bool ok = r.relation == Relation::Equal ? ScalarTraits<Scalar>::is_zero(out.rhs, 1e-9)
                      : r.relation == Relation::LessEqual ? (s >= 0 || ScalarTraits<Scalar>::is_zero(out.rhs, 1e-9))
                                                          : (s <= 0 || ScalarTraits<Scalar>::is_zero(out.rhs, 1e-9));
      if (!ok) ps.decided = true, ps.status = LpStatus::Infeasible;
      continue;
    }
    ps.reduced.add_row(std::move(out));
  }
  return ps;
}

template <class Scalar>
LpSolution<Scalar> postsolve(const LinearProgram<Scalar>& lp, const Presolved<Scalar>& ps, LpSolution<Scalar> inner) {
  LpSolution<Scalar> sol;
  sol.status = inner.status;
  sol.iterations = inner.iterations;
  sol.basis = std::move(inner.basis);
  sol.primal = ps.fixed;
  if (inner.primal.size() == ps.kept.size())
    for (std::size_t k = 0; k < ps.kept.size(); ++k) sol.primal[ps.kept[k]] = inner.primal[k];
  sol.value = evaluate_objective(lp, sol.primal);
  return sol;
}

}  // namespace

LpSolution<double> solve(const LinearProgram<double>& lp, const SolveOptions& options) {
  lp.validate();
  Presolved<double> ps = presolve(lp);
  if (ps.decided) {
    LpSolution<double> s;
    s.status = ps.status;
    return s;
  }
  LpSolution<double> inner = options.external_solver.empty() ? simplex_solve(ps.reduced, options.simplex)
                                                             : solve_external(ps.reduced, options.external_solver);
  return postsolve(lp, ps, std::move(inner));
}

LpSolution<Rational> solve(const LinearProgram<Rational>& lp, const SolveOptions& options) {
  lp.validate();
  Presolved<Rational> ps = presolve(lp);
  if (ps.decided) {
    LpSolution<Rational> s;
    s.status = ps.status;
    return s;
  }
  SimplexOptions float_opt = options.simplex;
  LpSolution<double> guide = simplex_solve(ps.reduced.cast<double>(), float_opt);
  const LpBasis* warm = guide.status == LpStatus::Optimal ? &guide.basis : nullptr;
  LpSolution<Rational> inner = simplex_solve(ps.reduced, options.simplex, warm);
  inner.iterations += guide.iterations;
  return postsolve(lp, ps, std::move(inner));
}

namespace {

CertifyResult certify_from(LpStatus status, double value, double tol, long iterations) {
  CertifyResult r;
  r.status = status;
  r.value = value;
  r.iterations = iterations;
  if (status != LpStatus::Optimal) r.verdict = Certificate::SolverFailure;
  else r.verdict = value >= 1 - tol ? Certificate::CertifiedOne : Certificate::BelowOne;
  return r;
}

}  // namespace

CertifyResult check_value_is_one(const LinearProgram<double>& lp, double tol, const SolveOptions& options) {
  const auto s = solve(lp, options);
  return certify_from(s.status, s.value, tol, s.iterations);
}

CertifyResult check_value_is_one(const LinearProgram<Rational>& lp, SolveMode mode, double tol,
                                 const SolveOptions& options) {
  if (mode == SolveMode::Float) return check_value_is_one(lp.cast<double>(), tol, options);
  const auto s = solve(lp, options);
  CertifyResult r;
  r.status = s.status;
  r.iterations = s.iterations;
  if (s.status != LpStatus::Optimal) return r;
  r.value = s.value.get_d();
  r.exact_value = s.value.get_str();
  r.verdict = s.value == 1 ? Certificate::CertifiedExactOne : Certificate::BelowOne;
  return r;
}

namespace {

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return s.str();
}
std::string fmt(const Rational& v) { return v.get_str(); }

template <class Scalar>
void write_mps_impl(const LinearProgram<Scalar>& lp, std::ostream& out) {
  const int n = lp.num_vars();
  std::vector<std::vector<std::pair<int, Scalar>>> cols(n);
  for (int i = 0; i < lp.num_rows(); ++i) {
    const auto& r = lp.row(i);
    for (std::size_t t = 0; t < r.index.size(); ++t)
      if (r.value[t] != 0) cols[r.index[t]].emplace_back(i, r.value[t]);
  }
  out << "NAME nsmac\n";
  out << "OBJSENSE\n    " << (lp.maximize ? "MAX" : "MIN") << "\n";
  out << "ROWS\n N obj\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    const char c = lp.row(i).relation == Relation::LessEqual ? 'L' : lp.row(i).relation == Relation::Equal ? 'E' : 'G';
    out << ' ' << c << " r" << i << '\n';
  }
  out << "COLUMNS\n";
  for (int j = 0; j < n; ++j) {
    if (lp.objective(j) != 0) out << " x" << j << " obj " << fmt(lp.objective(j)) << '\n';
    for (const auto& [i, v] : cols[j]) out << " x" << j << " r" << i << ' ' << fmt(v) << '\n';
    if (lp.objective(j) == 0 && cols[j].empty()) out << " x" << j << " obj 0\n";
  }
  out << "RHS\n";
  if (lp.objective_offset != 0) out << " rhs obj " << fmt(Scalar(-lp.objective_offset)) << '\n';
  for (int i = 0; i < lp.num_rows(); ++i)
    if (lp.row(i).rhs != 0) out << " rhs r" << i << ' ' << fmt(lp.row(i).rhs) << '\n';
  out << "BOUNDS\n";
  for (int j = 0; j < n; ++j) {
    const auto& lo = lp.lower(j);
    const auto& hi = lp.upper(j);
    if (lo && hi && *lo == *hi) {
      out << " FX bnd x" << j << ' ' << fmt(*lo) << '\n';
      continue;
    }
    if (!lo && !hi) {
      out << " FR bnd x" << j << '\n';
      continue;
    }
    if (!lo) out << " MI bnd x" << j << '\n';
    else if (*lo != 0) out << " LO bnd x" << j << ' ' << fmt(*lo) << '\n';
    if (hi) out << " UP bnd x" << j << ' ' << fmt(*hi) << '\n';
  }
  out << "ENDATA\n";
}

}  // namespace

void write_mps(const LinearProgram<double>& lp, std::ostream& out) { write_mps_impl(lp, out); }
void write_mps(const LinearProgram<Rational>& lp, std::ostream& out) { write_mps_impl(lp, out); }

LpSolution<double> solve_external(const LinearProgram<double>& lp, const std::string& executable) {
  namespace fs = std::filesystem;
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path();
  const std::string stem = "nsmac_" + std::to_string(::getpid()) + "_" + std::to_string(counter++);
  const fs::path model = dir / (stem + ".mps");
  const fs::path result = dir / (stem + ".sol");
  {
    std::ofstream out(model);
    write_mps(lp, out);
  }
  const std::string cmd = "\"" + executable + "\" \"" + model.string() + "\" \"" + result.string() + "\"";
  const int rc = std::system(cmd.c_str());
  LpSolution<double> sol;
  std::ifstream in(result);
  std::string word;
  if (rc != 0 || !(in >> word)) {
    fs::remove(model);
    fs::remove(result);
    throw std::runtime_error("external solver failed: " + cmd);
  }
  // Format: status word, objective value, iteration count, then one primal value per variable.
  if (word == "optimal") sol.status = LpStatus::Optimal;
  else if (word == "infeasible") sol.status = LpStatus::Infeasible;
  else if (word == "unbounded") sol.status = LpStatus::Unbounded;
  else sol.status = LpStatus::IterationLimit;
  double value = 0;
  in >> value >> sol.iterations;
  if (sol.status == LpStatus::Optimal) {
    sol.primal.resize(lp.num_vars());
    for (auto& v : sol.primal)
      if (!(in >> v)) throw std::runtime_error("external solver returned a short primal vector");
    sol.value = evaluate_objective(lp, sol.primal);
  }
  fs::remove(model);
  fs::remove(result);
  return sol;
}

}  // namespace nsmac
