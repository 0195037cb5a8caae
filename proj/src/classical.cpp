#include "nsmac/classical.hpp"

#include <cmath>

namespace nsmac {

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Next nondecreasing sequence over [0, alphabet) in lexicographic order.
bool next_multiset(std::vector<int>& v, int alphabet) {
  for (int i = int(v.size()) - 1; i >= 0; --i) {
    if (v[i] + 1 < alphabet) {
      ++v[i];
      for (std::size_t j = i + 1; j < v.size(); ++j) v[j] = v[i];
      return true;
    }
  }
  return false;
}

bool next_combination(std::vector<int>& v, int m) {
  const int k = int(v.size());
  for (int i = k - 1; i >= 0; --i) {
    if (v[i] < m - k + i) {
      ++v[i];
      for (int j = i + 1; j < k; ++j) v[j] = v[j - 1] + 1;
      return true;
    }
  }
  return false;
}

void check_budget(double work, std::uint64_t budget, const char* what) {
  if (work > double(budget))
    throw BudgetExceeded(std::string(what) + ": exhaustive search needs ~" + std::to_string(work) +
                         " operations, budget is " + std::to_string(budget));
}

}  // namespace

ClassicalResult brute_force_success(const Channel& w, int k1, int k2, Objective objective, std::uint64_t budget) {
  if (k1 < 1 || k2 < 1) throw std::invalid_argument("message counts must be positive");
  const double work = binomial(w.nx1() + k1 - 1, k1) * binomial(w.nx2() + k2 - 1, k2) * double(k1) * k2 * w.ny();
  check_budget(work, budget, "brute_force_success");

  ClassicalResult best;
  best.value = -1;
  std::vector<int> e1(k1, 0), e2(k2, 0);
  std::vector<int> d1(w.ny()), d2(w.ny());
  std::vector<double> acc1(k1), acc2(k2);
  do {
    std::fill(e2.begin(), e2.end(), 0);
    do {
      double total = 0;
      for (int y = 0; y < w.ny(); ++y) {
        if (objective == Objective::Joint) {
          double m = -1;
          for (int i1 = 0; i1 < k1; ++i1)
            for (int i2 = 0; i2 < k2; ++i2)
              if (double v = w(e1[i1], e2[i2], y); v > m) {
                m = v;
                d1[y] = i1;
                d2[y] = i2;
              }
          total += m;
        } else {
          std::fill(acc1.begin(), acc1.end(), 0.0);
          std::fill(acc2.begin(), acc2.end(), 0.0);
          for (int i1 = 0; i1 < k1; ++i1)
            for (int i2 = 0; i2 < k2; ++i2) {
              const double v = w(e1[i1], e2[i2], y);
              acc1[i1] += v;
              acc2[i2] += v;
            }
          d1[y] = int(std::max_element(acc1.begin(), acc1.end()) - acc1.begin());
          d2[y] = int(std::max_element(acc2.begin(), acc2.end()) - acc2.begin());
          total += 0.5 * (acc1[d1[y]] + acc2[d2[y]]);
        }
      }
      const double value = total / (double(k1) * k2);
      if (value > best.value) best = {value, {e1, e2, d1, d2}};
    } while (next_multiset(e2, w.nx2()));
  } while (next_multiset(e1, w.nx1()));
  return best;
}

double evaluate_code(const Channel& w, const CodeTables& code, Objective objective) {
  const int k1 = int(code.e1.size()), k2 = int(code.e2.size());
  double total = 0;
  for (int i1 = 0; i1 < k1; ++i1)
    for (int i2 = 0; i2 < k2; ++i2)
      for (int y = 0; y < w.ny(); ++y) {
        const double v = w(code.e1[i1], code.e2[i2], y);
        const bool ok1 = code.d1[y] == i1, ok2 = code.d2[y] == i2;
        total += objective == Objective::Joint ? v * (ok1 && ok2) : 0.5 * v * (ok1 + ok2);
      }
  return total / (double(k1) * k2);
}

double p2p_success(const P2PChannel& w, int k, std::uint64_t budget) {
  if (k < 1) throw std::invalid_argument("message count must be positive");
  const int m = int(w.rows());
  const int s = std::min(k, m);
  check_budget(binomial(m, s) * s * double(w.cols()), budget, "p2p_success");
  std::vector<int> subset(s);
  for (int i = 0; i < s; ++i) subset[i] = i;
  double best = 0;
  do {
    double f = 0;
    for (Eigen::Index y = 0; y < w.cols(); ++y) {
      double mx = 0;
      for (int x : subset) mx = std::max(mx, w(x, y));
      f += mx;
    }
    best = std::max(best, f);
  } while (next_combination(subset, m));
  return best / k;
}

}  // namespace nsmac
