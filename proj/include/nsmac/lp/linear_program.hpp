#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsmac/scalar.hpp"

namespace nsmac {

enum class Relation { LessEqual, Equal, GreaterEqual };

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

std::string to_string(LpStatus status);

template <class Scalar>
struct LpRow {
  std::vector<int> index;
  std::vector<Scalar> value;
  Relation relation = Relation::LessEqual;
  Scalar rhs = 0;
};

/// Sparse LP: optimize c.x + offset subject to rows and per-variable bounds.
template <class Scalar>
class LinearProgram {
 public:
  bool maximize = true;
  Scalar objective_offset = 0;

  int add_variable(Scalar objective = 0, std::optional<Scalar> lower = Scalar(0),
                   std::optional<Scalar> upper = std::nullopt) {
    objective_.push_back(std::move(objective));
    lower_.push_back(std::move(lower));
    upper_.push_back(std::move(upper));
    return num_vars() - 1;
  }

  /// Adds `count` variables with zero objective and bounds [0, +inf); returns the first index.
  int add_variables(int count) {
    const int first = num_vars();
    for (int i = 0; i < count; ++i) add_variable();
    return first;
  }

  int add_row(std::vector<int> index, std::vector<Scalar> value, Relation relation, Scalar rhs) {
    if (index.size() != value.size()) throw std::invalid_argument("row index/value size mismatch");
    rows_.push_back({std::move(index), std::move(value), relation, std::move(rhs)});
    return num_rows() - 1;
  }

  int add_row(LpRow<Scalar> row) {
    rows_.push_back(std::move(row));
    return num_rows() - 1;
  }

  void set_objective(int j, Scalar c) { objective_.at(j) = std::move(c); }
  void set_bounds(int j, std::optional<Scalar> lower, std::optional<Scalar> upper) {
    lower_.at(j) = std::move(lower);
    upper_.at(j) = std::move(upper);
  }

  int num_vars() const { return int(objective_.size()); }
  int num_rows() const { return int(rows_.size()); }
  std::size_t num_nonzeros() const {
    std::size_t nz = 0;
    for (const auto& r : rows_) nz += r.index.size();
    return nz;
  }

  const Scalar& objective(int j) const { return objective_[j]; }
  const std::vector<Scalar>& objective() const { return objective_; }
  const std::optional<Scalar>& lower(int j) const { return lower_[j]; }
  const std::optional<Scalar>& upper(int j) const { return upper_[j]; }
  const LpRow<Scalar>& row(int i) const { return rows_[i]; }
  const std::vector<LpRow<Scalar>>& rows() const { return rows_; }

  /// Throws on out-of-range indices, NaN coefficients or crossed bounds.
  void validate() const {
    auto bad = [](const Scalar& v) {
      if constexpr (ScalarTraits<Scalar>::exact) return false;
      else return v != v;
    };
    for (int j = 0; j < num_vars(); ++j) {
      if (bad(objective_[j])) throw std::invalid_argument("NaN objective coefficient");
      if (lower_[j] && upper_[j] && *upper_[j] < *lower_[j]) throw std::invalid_argument("crossed bounds");
    }
    for (const auto& r : rows_) {
      if (bad(r.rhs)) throw std::invalid_argument("NaN right-hand side");
      for (std::size_t k = 0; k < r.index.size(); ++k) {
        if (r.index[k] < 0 || r.index[k] >= num_vars()) throw std::invalid_argument("row index out of range");
        if (bad(r.value[k])) throw std::invalid_argument("NaN constraint coefficient");
      }
    }
  }

  template <class Other>
  LinearProgram<Other> cast() const {
    auto conv = [](const Scalar& v) -> Other {
      if constexpr (std::is_same_v<Other, Scalar>) return v;
      else if constexpr (std::is_same_v<Other, double>) return to_double(v);
      else return Other(v);
    };
    auto conv_opt = [&](const std::optional<Scalar>& v) -> std::optional<Other> {
      if (!v) return std::nullopt;
      return conv(*v);
    };
    LinearProgram<Other> out;
    out.maximize = maximize;
    out.objective_offset = conv(objective_offset);
    for (int j = 0; j < num_vars(); ++j) out.add_variable(conv(objective_[j]), conv_opt(lower_[j]), conv_opt(upper_[j]));
    for (const auto& r : rows_) {
      std::vector<Other> v;
      v.reserve(r.value.size());
      for (const auto& x : r.value) v.push_back(conv(x));
      out.add_row(r.index, std::move(v), r.relation, conv(r.rhs));
    }
    return out;
  }

 private:
  std::vector<Scalar> objective_;
  std::vector<std::optional<Scalar>> lower_, upper_;
  std::vector<LpRow<Scalar>> rows_;
};

/// Simplex basis over structural variables followed by one logical per row.
struct LpBasis {
  std::vector<int> basic;             // variable indices, one per row
  std::vector<signed char> at_upper;  // nonbasic variables resting at their upper bound
  bool empty() const { return basic.empty(); }
};

template <class Scalar>
struct LpSolution {
  LpStatus status = LpStatus::IterationLimit;
  Scalar value = 0;
  std::vector<Scalar> primal;
  long iterations = 0;
  LpBasis basis;
};

/// Largest absolute violation of rows and bounds by a primal point.
template <class Scalar>
double max_violation(const LinearProgram<Scalar>& lp, const std::vector<Scalar>& x) {
  double worst = 0;
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (lp.lower(j)) worst = std::max(worst, to_double(Scalar(*lp.lower(j) - x[j])));
    if (lp.upper(j)) worst = std::max(worst, to_double(Scalar(x[j] - *lp.upper(j))));
  }
  for (const auto& r : lp.rows()) {
    Scalar a = 0;
    for (std::size_t k = 0; k < r.index.size(); ++k) a += r.value[k] * x[r.index[k]];
    const double diff = to_double(Scalar(a - r.rhs));
    if (r.relation == Relation::LessEqual) worst = std::max(worst, diff);
    else if (r.relation == Relation::GreaterEqual) worst = std::max(worst, -diff);
    else worst = std::max(worst, std::abs(diff));
  }
  return worst;
}

template <class Scalar>
Scalar evaluate_objective(const LinearProgram<Scalar>& lp, const std::vector<Scalar>& x) {
  Scalar v = lp.objective_offset;
  for (int j = 0; j < lp.num_vars(); ++j)
    if (lp.objective(j) != 0) v += lp.objective(j) * x[j];
  return v;
}

}  // namespace nsmac
