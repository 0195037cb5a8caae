#pragma once

#include <algorithm>
#include <vector>

#include "nsmac/scalar.hpp"

namespace nsmac::lp {

template <class Scalar>
struct SparseVec {
  std::vector<int> index;
  std::vector<Scalar> value;
};

/// Sparse LU of a simplex basis (Markowitz pivoting with a threshold test)
/// followed by product-form eta updates.
template <class Scalar>
class BasisFactor {
 public:
  using Traits = ScalarTraits<Scalar>;

  struct Options {
    double threshold = 0.01;
    double abs_pivot_tol = 1e-11;
    double drop_tol = 1e-14;
  };

  explicit BasisFactor(Options options = {}) : opt_(options) {}

  /// Factorizes the m x m matrix whose column at position j is *columns[j].
  /// Positions that received no pivot are returned in `singular_positions`,
  /// paired with the rows left uncovered in `singular_rows`.
  bool factorize(int m, const std::vector<const SparseVec<Scalar>*>& columns, std::vector<int>& singular_positions,
                 std::vector<int>& singular_rows);

  /// Solves B z = v in place: on entry v is indexed by row, on exit by basis position.
  void ftran(std::vector<Scalar>& v) const;

  /// Solves B^T z = v in place: on entry v is indexed by basis position, on exit by row.
  void btran(std::vector<Scalar>& v) const;

  /// Replaces the column at position r given alpha = B^{-1} a_new (dense, by position).
  void update(int r, const std::vector<Scalar>& alpha);

  int num_updates() const { return int(etas_.size()); }
  std::size_t factor_nonzeros() const { return lu_nnz_; }
  std::size_t eta_nonzeros() const { return eta_nnz_; }

 private:
  bool zero(const Scalar& x) const { return Traits::is_zero(x, opt_.drop_tol); }

  struct Step {
    int row, col;
    Scalar pivot;
    std::vector<int> u_index;  // positions pivoted later
    std::vector<Scalar> u_value;
    std::vector<int> l_index;  // rows eliminated by this pivot
    std::vector<Scalar> l_value;
  };
  struct Eta {
    int r;
    Scalar pivot;
    std::vector<int> index;
    std::vector<Scalar> value;
  };

  // Count buckets for the active submatrix.
  struct Buckets {
    std::vector<int> head, next, prev, count;
    void init(int n, int max_count) {
      head.assign(max_count + 2, -1);
      next.assign(n, -1);
      prev.assign(n, -1);
      count.assign(n, 0);
    }
    void insert(int i, int c) {
      count[i] = c;
      prev[i] = -1;
      next[i] = head[c];
      if (head[c] >= 0) prev[head[c]] = i;
      head[c] = i;
    }
    void remove(int i) {
      if (prev[i] >= 0) next[prev[i]] = next[i];
      else head[count[i]] = next[i];
      if (next[i] >= 0) prev[next[i]] = prev[i];
      prev[i] = next[i] = -1;
    }
    void move(int i, int c) {
      remove(i);
      insert(i, c);
    }
  };

  Options opt_;
  int m_ = 0;
  std::vector<Step> steps_;
  std::vector<Eta> etas_;
  std::size_t lu_nnz_ = 0, eta_nnz_ = 0;
  mutable std::vector<Scalar> work_;
};

template <class Scalar>
bool BasisFactor<Scalar>::factorize(int m, const std::vector<const SparseVec<Scalar>*>& columns,
                                    std::vector<int>& singular_positions, std::vector<int>& singular_rows) {
  m_ = m;
  steps_.clear();
  etas_.clear();
  eta_nnz_ = 0;
  lu_nnz_ = 0;
  singular_positions.clear();
  singular_rows.clear();

  std::vector<std::vector<int>> rcol(m);
  std::vector<std::vector<Scalar>> rval(m);
  std::vector<std::vector<int>> crow(m);
  for (int j = 0; j < m; ++j) {
    const auto& c = *columns[j];
    for (std::size_t t = 0; t < c.index.size(); ++t) {
      if (zero(c.value[t])) continue;
      rcol[c.index[t]].push_back(j);
      rval[c.index[t]].push_back(c.value[t]);
      crow[j].push_back(c.index[t]);
    }
  }
  std::vector<char> row_active(m, 1), col_active(m, 1);
  Buckets rb, cb;
  rb.init(m, m);
  cb.init(m, m);
  for (int i = 0; i < m; ++i) rb.insert(i, int(rcol[i].size()));
  for (int j = 0; j < m; ++j) cb.insert(j, int(crow[j].size()));

  auto find_in_row = [&](int i, int j) -> int {
    const auto& rc = rcol[i];
    for (std::size_t t = 0; t < rc.size(); ++t)
      if (rc[t] == j) return int(t);
    return -1;
  };
  auto erase_from_col = [&](int j, int i) {
    auto& cr = crow[j];
    for (std::size_t t = 0; t < cr.size(); ++t)
      if (cr[t] == i) {
        cr[t] = cr.back();
        cr.pop_back();
        break;
      }
    cb.move(j, int(cr.size()));
  };
  auto erase_from_row = [&](int i, int t) {
    rcol[i][t] = rcol[i].back();
    rval[i][t] = rval[i].back();
    rcol[i].pop_back();
    rval[i].pop_back();
  };
  auto col_max = [&](int j) {
    Scalar best = 0;
    for (int i : crow[j]) {
      Scalar a = Traits::abs(rval[i][find_in_row(i, j)]);
      if (a > best) best = a;
    }
    return best;
  };
  auto acceptable = [&](const Scalar& v, const Scalar& cmax) {
    if (zero(v)) return false;
    if constexpr (Traits::exact) return true;
    else return std::abs(v) >= opt_.abs_pivot_tol && std::abs(v) >= opt_.threshold * cmax;
  };

  std::vector<int> pos(m, -1);
  int remaining = m;
  while (remaining > 0) {
    int p = -1, q = -1;
    // Empty columns are structurally singular.
    while (cb.head[0] >= 0) {
      int j = cb.head[0];
      cb.remove(j);
      col_active[j] = 0;
      singular_positions.push_back(j);
      --remaining;
    }
    if (remaining == 0) break;
    if (cb.head[1] >= 0) {
      q = cb.head[1];
      p = crow[q][0];
      if (!acceptable(rval[p][find_in_row(p, q)], Scalar(0))) {
        // Numerically zero: drop the entry and retry.
        erase_from_row(p, find_in_row(p, q));
        rb.move(p, int(rcol[p].size()));
        erase_from_col(q, p);
        continue;
      }
    } else {
      for (int i = rb.head[1]; i >= 0 && p < 0; i = rb.next[i]) {
        const int j = rcol[i][0];
        if (acceptable(rval[i][0], col_max(j))) {
          p = i;
          q = j;
        }
      }
      if (p < 0) {
        double best_cost = -1;
        int searched = 0;
        for (int c = 2; c <= m && (p < 0 || searched < 4); ++c) {
          for (int j = cb.head[c]; j >= 0; j = cb.next[j]) {
            const Scalar cmax = col_max(j);
            for (int i : crow[j]) {
              const Scalar& v = rval[i][find_in_row(i, j)];
              if (!acceptable(v, cmax)) continue;
              const double cost = double(rcol[i].size() - 1) * double(c - 1);
              if (p < 0 || cost < best_cost) {
                best_cost = cost;
                p = i;
                q = j;
              }
            }
            if (p >= 0 && ++searched >= 4) break;
          }
          if (p >= 0 && best_cost <= double(c - 1) * double(c - 1)) break;
        }
      }
      if (p < 0) {
        // No acceptable pivot remains: the rest is singular.
        for (int j = 0; j < m; ++j)
          if (col_active[j]) singular_positions.push_back(j);
        break;
      }
    }

    Step step;
    step.row = p;
    step.col = q;
    const int tq = find_in_row(p, q);
    step.pivot = rval[p][tq];
    for (std::size_t t = 0; t < rcol[p].size(); ++t) {
      if (int(t) == tq) continue;
      step.u_index.push_back(rcol[p][t]);
      step.u_value.push_back(rval[p][t]);
    }
    // Eliminate column q from the other active rows.
    const std::vector<int> rows_q = crow[q];
    for (int i : rows_q) {
      if (i == p) continue;
      const int ti = find_in_row(i, q);
      Scalar l = rval[i][ti] / step.pivot;
      erase_from_row(i, ti);
      step.l_index.push_back(i);
      for (std::size_t t = 0; t < rcol[i].size(); ++t) pos[rcol[i][t]] = int(t);
      for (std::size_t t = 0; t < step.u_index.size(); ++t) {
        const int j = step.u_index[t];
        if (pos[j] >= 0) {
          rval[i][pos[j]] -= l * step.u_value[t];
        } else {
          pos[j] = int(rcol[i].size());
          rcol[i].push_back(j);
          rval[i].push_back(Scalar(-(l * step.u_value[t])));
          crow[j].push_back(i);
          cb.move(j, int(crow[j].size()));
        }
      }
      for (int t = int(rcol[i].size()) - 1; t >= 0; --t) {
        pos[rcol[i][t]] = -1;
        if (zero(rval[i][t])) {
          const int j = rcol[i][t];
          erase_from_row(i, t);
          erase_from_col(j, i);
        }
      }
      rb.move(i, int(rcol[i].size()));
      step.l_value.push_back(std::move(l));
    }
    for (int j : step.u_index) erase_from_col(j, p);
    crow[q].clear();
    cb.remove(q);
    rb.remove(p);
    col_active[q] = 0;
    row_active[p] = 0;
    rcol[p].clear();
    rval[p].clear();
    lu_nnz_ += 1 + step.u_index.size() + step.l_index.size();
    steps_.push_back(std::move(step));
    --remaining;
  }
  for (int i = 0; i < m; ++i)
    if (row_active[i]) singular_rows.push_back(i);
  return singular_positions.empty();
}

template <class Scalar>
void BasisFactor<Scalar>::ftran(std::vector<Scalar>& v) const {
  for (const Step& s : steps_) {
    if (zero(v[s.row])) continue;
    const Scalar& x = v[s.row];
    for (std::size_t t = 0; t < s.l_index.size(); ++t) v[s.l_index[t]] -= s.l_value[t] * x;
  }
  work_.resize(m_);
  for (auto& w : work_) w = 0;
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
    Scalar acc = v[it->row];
    for (std::size_t t = 0; t < it->u_index.size(); ++t) {
      const Scalar& z = work_[it->u_index[t]];
      if (!zero(z)) acc -= it->u_value[t] * z;
    }
    if (!zero(acc)) work_[it->col] = acc / it->pivot;
  }
  std::swap(v, work_);
  for (const Eta& e : etas_) {
    if (zero(v[e.r])) continue;
    v[e.r] /= e.pivot;
    const Scalar& x = v[e.r];
    for (std::size_t t = 0; t < e.index.size(); ++t) v[e.index[t]] -= e.value[t] * x;
  }
}

template <class Scalar>
void BasisFactor<Scalar>::btran(std::vector<Scalar>& v) const {
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    Scalar acc = v[it->r];
    for (std::size_t t = 0; t < it->index.size(); ++t) {
      const Scalar& z = v[it->index[t]];
      if (!zero(z)) acc -= it->value[t] * z;
    }
    v[it->r] = acc / it->pivot;
  }
  work_.resize(m_);
  for (auto& w : work_) w = 0;
  for (const Step& s : steps_) {
    if (zero(v[s.col])) continue;
    Scalar w = v[s.col] / s.pivot;
    for (std::size_t t = 0; t < s.u_index.size(); ++t) v[s.u_index[t]] -= s.u_value[t] * w;
    work_[s.row] = std::move(w);
  }
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
    Scalar acc = work_[it->row];
    for (std::size_t t = 0; t < it->l_index.size(); ++t) {
      const Scalar& z = work_[it->l_index[t]];
      if (!zero(z)) acc -= it->l_value[t] * z;
    }
    work_[it->row] = std::move(acc);
  }
  std::swap(v, work_);
}

template <class Scalar>
void BasisFactor<Scalar>::update(int r, const std::vector<Scalar>& alpha) {
  Eta e;
  e.r = r;
  e.pivot = alpha[r];
  for (int i = 0; i < m_; ++i)
    if (i != r && !zero(alpha[i])) {
      e.index.push_back(i);
      e.value.push_back(alpha[i]);
    }
  eta_nnz_ += e.index.size() + 1;
  etas_.push_back(std::move(e));
}

}  // namespace nsmac::lp
