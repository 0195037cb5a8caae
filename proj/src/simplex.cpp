#include "nsmac/lp/simplex.hpp"

#include <chrono>
#include <cstdio>

#include "nsmac/lp/basis_factor.hpp"

namespace nsmac {

namespace {

using lp::BasisFactor;
using lp::SparseVec;

template <class Scalar>
class Simplex {
 public:
  using Traits = ScalarTraits<Scalar>;

  Simplex(const LinearProgram<Scalar>& lp, const SimplexOptions& opt)
      : lp_(lp), opt_(opt), n_(lp.num_vars()), m_(lp.num_rows()), total_(n_ + m_) {
    typename BasisFactor<Scalar>::Options fo;
    fo.abs_pivot_tol = 1e-11;
    factor_ = BasisFactor<Scalar>(fo);
    cols_.resize(total_);
    for (int i = 0; i < m_; ++i) {
      const auto& r = lp.row(i);
      for (std::size_t t = 0; t < r.index.size(); ++t) {
        if (r.value[t] == 0) continue;
        cols_[r.index[t]].index.push_back(i);
        cols_[r.index[t]].value.push_back(r.value[t]);
      }
      cols_[n_ + i].index.push_back(i);
      cols_[n_ + i].value.push_back(Scalar(-1));
    }
    lo_.assign(total_, Scalar(0));
    hi_.assign(total_, Scalar(0));
    has_lo_.assign(total_, 0);
    has_hi_.assign(total_, 0);
    for (int j = 0; j < n_; ++j) {
      if (lp.lower(j)) has_lo_[j] = 1, lo_[j] = *lp.lower(j);
      if (lp.upper(j)) has_hi_[j] = 1, hi_[j] = *lp.upper(j);
    }
    for (int i = 0; i < m_; ++i) {
      const auto& r = lp.row(i);
      const int j = n_ + i;
      if (r.relation != Relation::GreaterEqual) has_hi_[j] = 1, hi_[j] = r.rhs;
      if (r.relation != Relation::LessEqual) has_lo_[j] = 1, lo_[j] = r.rhs;
    }
    cost_.assign(total_, Scalar(0));
    for (int j = 0; j < n_; ++j) cost_[j] = lp.maximize ? Scalar(-lp.objective(j)) : lp.objective(j);
    feas_tol_ = opt.primal_tol;
    bland_stall_ = opt.bland_stall >= 0 ? opt.bland_stall : 5L * std::max(n_, 1);
  }

  LpSolution<Scalar> run(const LpBasis* warm) {
    start_ = std::chrono::steady_clock::now();
    x_.assign(total_, Scalar(0));
    pos_.assign(total_, -1);
    at_upper_.assign(total_, 0);
    head_.resize(m_);
    if (warm && int(warm->basic.size()) == m_ && int(warm->at_upper.size()) == total_) {
      at_upper_ = warm->at_upper;
      for (int p = 0; p < m_; ++p) head_[p] = warm->basic[p];
      std::vector<char> seen(total_, 0);
      bool ok = true;
      for (int b : head_) {
        if (b < 0 || b >= total_ || seen[b]) ok = false;
        else seen[b] = 1;
      }
      if (!ok)
        for (int p = 0; p < m_; ++p) head_[p] = n_ + p;
    } else {
      for (int p = 0; p < m_; ++p) head_[p] = n_ + p;
    }
    for (int p = 0; p < m_; ++p) pos_[head_[p]] = p;
    for (int j = 0; j < total_; ++j)
      if (pos_[j] < 0) place_at_bound(j);

    weights_.assign(total_, 1.0);
    LpSolution<Scalar> sol;
    refactor();
    long degenerate_run = 0;
    bool fresh = true;  // factorization and duals recomputed since the last pivot
    while (true) {
      if (iterations_ >= opt_.iteration_limit || out_of_time()) {
        sol.status = LpStatus::IterationLimit;
        break;
      }
      const bool infeasible = update_phase();
      const bool bland = degenerate_run > bland_stall_;
      int dir = 0;
      const int q = price(bland, dir);
      if (q < 0) {
        if (!fresh) {
          refactor();
          fresh = true;
          continue;
        }
        if (infeasible && !Traits::exact) {
          // Residual infeasibility from rounding after a refactorization: widen the tolerance and go on.
          const double inf = max_infeasibility();
          if (inf <= kMaxFeasTol && inf >= feas_tol_) {
            feas_tol_ = std::min(kMaxFeasTol, 2 * inf);
            duals_valid_ = false;
            continue;
          }
        }
        sol.status = infeasible ? LpStatus::Infeasible : LpStatus::Optimal;
        break;
      }
      // Entering column in basis coordinates.
      alpha_.assign(m_, Scalar(0));
      for (std::size_t t = 0; t < cols_[q].index.size(); ++t) alpha_[cols_[q].index[t]] = cols_[q].value[t];
      factor_.ftran(alpha_);

      Scalar theta;
      int r = -1;
      bool leave_at_upper = false;
      if (!ratio_test(q, dir, bland, r, theta, leave_at_upper)) {
        if (!fresh) {
          refactor();
          fresh = true;
          continue;
        }
        sol.status = LpStatus::Unbounded;
        break;
      }
      ++iterations_;
      fresh = false;
      if (Traits::is_zero(theta, 0.0)) ++degenerate_run;
      else degenerate_run = 0;

      // Primal step.
      if (!Traits::is_zero(theta, 0.0)) {
        const Scalar step = dir > 0 ? theta : Scalar(-theta);
        x_[q] += step;
        for (int p = 0; p < m_; ++p)
          if (!Traits::is_zero(alpha_[p], 0.0)) x_[head_[p]] -= step * alpha_[p];
      }
      if (r < 0) {
        // Bound flip of the entering variable.
        at_upper_[q] = dir > 0;
        x_[q] = dir > 0 ? hi_[q] : lo_[q];
        continue;
      }
      const int leaving = head_[r];
      update_duals(q, r, leaving);
      if (phase_cost_[leaving] != 0) {
        phase_cost_[leaving] = 0;
        duals_valid_ = false;
      }
      head_[r] = q;
      pos_[q] = r;
      pos_[leaving] = -1;
      at_upper_[leaving] = leave_at_upper;
      x_[leaving] = leave_at_upper ? hi_[leaving] : lo_[leaving];
      at_upper_[q] = 0;
      if (factor_.num_updates() + 1 >= opt_.refactor_interval) {
        refactor();
        fresh = true;
      } else {
        factor_.update(r, alpha_);
      }
      if (opt_.log_every > 0 && iterations_ % opt_.log_every == 0) log_progress();
    }

    sol.iterations = iterations_;
    sol.primal.assign(x_.begin(), x_.begin() + n_);
    sol.value = evaluate_objective(lp_, sol.primal);
    sol.basis.basic = head_;
    sol.basis.at_upper = at_upper_;
    for (int p = 0; p < m_; ++p) sol.basis.at_upper[head_[p]] = 0;
    return sol;
  }

 private:
  bool out_of_time() const {
    if (opt_.time_limit <= 0 || iterations_ % 64 != 0) return false;
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return s > opt_.time_limit;
  }

  void log_progress() {
    Scalar obj = 0;
    for (int j = 0; j < n_; ++j)
      if (cost_[j] != 0) obj += cost_[j] * x_[j];
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::fprintf(stderr, "simplex it=%ld phase=%d obj=%.12g lu=%zu t=%.1fs\n", iterations_, phase1_ ? 1 : 2,
                 to_double(Scalar(-obj)), factor_.factor_nonzeros(), s);
  }

  void place_at_bound(int j) {
    if (at_upper_[j] && has_hi_[j]) x_[j] = hi_[j];
    else if (has_lo_[j]) x_[j] = lo_[j], at_upper_[j] = 0;
    else if (has_hi_[j]) x_[j] = hi_[j], at_upper_[j] = 1;
    else x_[j] = 0, at_upper_[j] = 0;
  }

  double ptol() const { return Traits::exact ? 0.0 : opt_.primal_tol; }

  double max_infeasibility() const {
    double worst = 0;
    for (int p = 0; p < m_; ++p) {
      const int b = head_[p];
      if (has_lo_[b]) worst = std::max(worst, to_double(Scalar(lo_[b] - x_[b])));
      if (has_hi_[b]) worst = std::max(worst, to_double(Scalar(x_[b] - hi_[b])));
    }
    return worst;
  }

  bool below(int j) const {
    if (!has_lo_[j]) return false;
    if constexpr (Traits::exact) return x_[j] < lo_[j];
    else return x_[j] < lo_[j] - feas_tol_;
  }
  bool above(int j) const {
    if (!has_hi_[j]) return false;
    if constexpr (Traits::exact) return x_[j] > hi_[j];
    else return x_[j] > hi_[j] + feas_tol_;
  }

  void refactor() {
    std::vector<const SparseVec<Scalar>*> cols(m_);
    for (int p = 0; p < m_; ++p) cols[p] = &cols_[head_[p]];
    std::vector<int> bad_pos, bad_rows;
    if (!factor_.factorize(m_, cols, bad_pos, bad_rows)) {
      // Swap unpivoted columns for logicals of the uncovered rows.
      for (std::size_t t = 0; t < bad_pos.size(); ++t) {
        const int p = bad_pos[t];
        const int out = head_[p];
        const int in = n_ + bad_rows[t];
        pos_[out] = -1;
        place_at_bound(out);
        head_[p] = in;
        pos_[in] = p;
      }
      for (int p = 0; p < m_; ++p) cols[p] = &cols_[head_[p]];
      factor_.factorize(m_, cols, bad_pos, bad_rows);
    }
    // x_B = B^{-1} (-N x_N)
    std::vector<Scalar> rhs(m_, Scalar(0));
    for (int j = 0; j < total_; ++j) {
      if (pos_[j] >= 0 || Traits::is_zero(x_[j], 0.0)) continue;
      for (std::size_t t = 0; t < cols_[j].index.size(); ++t) rhs[cols_[j].index[t]] -= cols_[j].value[t] * x_[j];
    }
    factor_.ftran(rhs);
    for (int p = 0; p < m_; ++p) x_[head_[p]] = rhs[p];
    duals_valid_ = false;
  }

  // Selects phase-1 or phase-2 costs; returns whether any basic variable is infeasible.
  bool update_phase() {
    bool infeasible = false;
    bool changed = !duals_valid_;
    if (phase_cost_.size() != std::size_t(total_)) phase_cost_.assign(total_, 0), changed = true;
    for (int p = 0; p < m_; ++p) {
      const int b = head_[p];
      const signed char c = below(b) ? -1 : above(b) ? 1 : 0;
      if (c) infeasible = true;
      if (phase_cost_[b] != c) changed = true;
      phase_cost_[b] = c;
    }
    if (infeasible != phase1_) changed = true;
    phase1_ = infeasible;
    if (changed) {
      for (int j = 0; j < total_; ++j)
        if (pos_[j] < 0) phase_cost_[j] = 0;
      compute_duals();
    }
    return infeasible;
  }

  const Scalar& active_cost(int j) const {
    static const Scalar kMinus(-1), kZero(0), kPlus(1);
    if (!phase1_) return cost_[j];
    return phase_cost_[j] < 0 ? kMinus : phase_cost_[j] > 0 ? kPlus : kZero;
  }

  void compute_duals() {
    std::vector<Scalar> y(m_);
    for (int p = 0; p < m_; ++p) y[p] = active_cost(head_[p]);
    factor_.btran(y);
    d_.assign(total_, Scalar(0));
    for (int j = 0; j < total_; ++j) {
      if (pos_[j] >= 0) continue;
      Scalar v = active_cost(j);
      for (std::size_t t = 0; t < cols_[j].index.size(); ++t) {
        const Scalar& yi = y[cols_[j].index[t]];
        if (!Traits::is_zero(yi, 0.0)) v -= yi * cols_[j].value[t];
      }
      d_[j] = std::move(v);
    }
    duals_valid_ = true;
  }

  // Entering variable and direction, or -1 at optimality.
  int price(bool bland, int& dir) {
    const double tol = Traits::exact ? 0.0 : opt_.dual_tol;
    int best = -1;
    Scalar best_mag = 0;
    for (int j = 0; j < total_; ++j) {
      if (pos_[j] >= 0) continue;
      if (has_lo_[j] && has_hi_[j] && lo_[j] == hi_[j]) continue;
      const Scalar& dj = d_[j];
      int dj_dir = 0;
      const bool free_var = !has_lo_[j] && !has_hi_[j];
      if (Traits::is_zero(dj, tol)) continue;
      if (Traits::sign(dj) < 0 && (free_var || !at_upper_[j])) dj_dir = 1;
      if (Traits::sign(dj) > 0 && (free_var || at_upper_[j])) dj_dir = -1;
      if (!dj_dir) continue;
      if (bland) {
        dir = dj_dir;
        return j;
      }
      Scalar mag = Traits::abs(dj);
      if constexpr (!Traits::exact) mag = mag * mag / weights_[j];
      if (best < 0 || mag > best_mag) {
        best = j;
        best_mag = std::move(mag);
        dir = dj_dir;
      }
    }
    return best;
  }

  // Chooses the leaving position r (or -1 for a bound flip). Returns false if the ray is unbounded.
  bool ratio_test(int q, int dir, bool bland, int& r, Scalar& theta, bool& leave_at_upper) {
    const bool harris = !Traits::exact && !bland;
    const double piv = Traits::exact ? 0.0 : opt_.pivot_tol;
    const double tol = ptol();
    r = -1;
    bool have = false;
    Scalar best_ratio = 0;

    // Limit for basic p moving at rate delta; target is the bound reached, returns false if none.
    auto limit = [&](int p, const Scalar& delta, Scalar& bound, bool& upper) -> bool {
      const int b = head_[p];
      if (Traits::sign(delta) > 0) {
        if (phase1_ && below(b)) {
          bound = lo_[b], upper = false;
          return true;
        }
        if (phase1_ && above(b)) return false;
        if (!has_hi_[b]) return false;
        bound = hi_[b], upper = true;
        return true;
      }
      if (phase1_ && above(b)) {
        bound = hi_[b], upper = true;
        return true;
      }
      if (phase1_ && below(b)) return false;
      if (!has_lo_[b]) return false;
      bound = lo_[b], upper = false;
      return true;
    };

    Scalar bound;
    bool upper = false;
    if (harris) {
      double theta_max = std::numeric_limits<double>::infinity();
      for (int p = 0; p < m_; ++p) {
        if (Traits::is_zero(alpha_[p], piv)) continue;
        const Scalar delta = dir > 0 ? Scalar(-alpha_[p]) : alpha_[p];
        if (!limit(p, delta, bound, upper)) continue;
        const double d = to_double(delta);
        const double relaxed = (to_double(bound) + (d > 0 ? tol : -tol) - to_double(x_[head_[p]])) / d;
        theta_max = std::min(theta_max, relaxed);
      }
      double best_alpha = -1;
      for (int p = 0; p < m_; ++p) {
        if (Traits::is_zero(alpha_[p], piv)) continue;
        const Scalar delta = dir > 0 ? Scalar(-alpha_[p]) : alpha_[p];
        if (!limit(p, delta, bound, upper)) continue;
        const double d = to_double(delta);
        const double ratio = (to_double(bound) - to_double(x_[head_[p]])) / d;
        if (ratio > theta_max) continue;
        const double a = std::abs(d);
        if (a > best_alpha || (a == best_alpha && head_[p] < head_[r])) {
          best_alpha = a;
          r = p;
          best_ratio = Scalar(std::max(ratio, 0.0));
          leave_at_upper = upper;
        }
      }
      have = r >= 0;
    } else {
      for (int p = 0; p < m_; ++p) {
        if (Traits::is_zero(alpha_[p], piv)) continue;
        const Scalar delta = dir > 0 ? Scalar(-alpha_[p]) : alpha_[p];
        if (!limit(p, delta, bound, upper)) continue;
        Scalar ratio = (bound - x_[head_[p]]) / delta;
        if (Traits::sign(ratio) < 0) ratio = 0;
        if (!have || ratio < best_ratio || (ratio == best_ratio && head_[p] < head_[r])) {
          have = true;
          r = p;
          best_ratio = std::move(ratio);
          leave_at_upper = upper;
        }
      }
    }
    if (has_lo_[q] && has_hi_[q]) {
      Scalar range = hi_[q] - lo_[q];
      if (!have || range <= best_ratio) {
        r = -1;
        theta = std::move(range);
        return true;
      }
    }
    if (!have) return false;
    theta = best_ratio;
    return true;
  }

  void devex_bump(int j, double ratio, double wq) {
    const double w = ratio * ratio * wq;
    if (w > weights_[j]) weights_[j] = w;
  }

  // Reduced costs after q enters at position r and `leaving` exits.
  void update_duals(int q, int r, int leaving) {
    std::vector<Scalar> rho(m_, Scalar(0));
    rho[r] = 1;
    factor_.btran(rho);
    const Scalar theta_d = d_[q] / alpha_[r];
    const bool devex = !Traits::exact;
    const double arq = to_double(alpha_[r]);
    const double wq = devex ? weights_[q] : 0.0;
    if (row_acc_.size() != std::size_t(n_)) row_acc_.assign(n_, Scalar(0)), row_mark_.assign(n_, 0);
    touched_.clear();
    for (int i = 0; i < m_; ++i) {
      if (Traits::is_zero(rho[i], 0.0)) continue;
      const auto& row = lp_.row(i);
      for (std::size_t t = 0; t < row.index.size(); ++t) {
        const int j = row.index[t];
        if (pos_[j] >= 0) continue;
        if (!row_mark_[j]) row_mark_[j] = 1, touched_.push_back(j);
        row_acc_[j] += rho[i] * row.value[t];
      }
      const int logical = n_ + i;
      if (pos_[logical] < 0) {
        d_[logical] += theta_d * rho[i];
        if (devex) devex_bump(logical, to_double(rho[i]) / arq, wq);
      }
    }
    for (int j : touched_) {
      if (j != q) {
        d_[j] -= theta_d * row_acc_[j];
        if (devex) devex_bump(j, to_double(row_acc_[j]) / arq, wq);
      }
      row_acc_[j] = 0;
      row_mark_[j] = 0;
    }
    d_[q] = 0;
    d_[leaving] = -theta_d;
    if (devex) {
      weights_[leaving] = std::max(wq / (arq * arq), 1.0);
      if (weights_[leaving] > 1e8) std::fill(weights_.begin(), weights_.end(), 1.0);
    }
  }

  const LinearProgram<Scalar>& lp_;
  SimplexOptions opt_;
  int n_, m_, total_;
  std::vector<SparseVec<Scalar>> cols_;
  std::vector<Scalar> lo_, hi_, cost_;
  std::vector<char> has_lo_, has_hi_;
  std::vector<Scalar> x_, d_, alpha_, row_acc_;
  std::vector<int> head_, pos_, touched_;
  std::vector<char> row_mark_;
  std::vector<signed char> at_upper_, phase_cost_;
  std::vector<double> weights_;
  BasisFactor<Scalar> factor_;
  bool phase1_ = false, duals_valid_ = false;
  long iterations_ = 0, bland_stall_ = 0;
  double feas_tol_ = 1e-9;
  static constexpr double kMaxFeasTol = 1e-7;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

template <class Scalar>
LpSolution<Scalar> simplex_solve(const LinearProgram<Scalar>& lp, const SimplexOptions& options,
                                 const LpBasis* warm_start) {
  lp.validate();
  Simplex<Scalar> s(lp, options);
  return s.run(warm_start);
}

template LpSolution<double> simplex_solve(const LinearProgram<double>&, const SimplexOptions&, const LpBasis*);
template LpSolution<Rational> simplex_solve(const LinearProgram<Rational>&, const SimplexOptions&, const LpBasis*);

}  // namespace nsmac
