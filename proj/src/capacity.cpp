#include "nsmac/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "nsmac/lp/solve.hpp"

namespace nsmac {

namespace {

constexpr double kDistTol = 1e-12;

double xlog2x(double x) { return x > 0 ? x * std::log2(x) : 0.0; }

void check_law(const Eigen::MatrixXd& p) {
  if (p.size() == 0) throw std::invalid_argument("empty input law");
  if ((p.array() < 0).any()) throw std::invalid_argument("negative probability in input law");
  if (std::abs(p.sum() - 1) > kDistTol) throw std::invalid_argument("input law does not sum to 1");
}

}  // namespace

JointDist JointDist::product(const Eigen::VectorXd& p1, const Eigen::VectorXd& p2) {
  check_law(p1);
  check_law(p2);
  JointDist d;
  d.p = p1 * p2.transpose();
  d.product_form = true;
  d.p1 = p1;
  d.p2 = p2;
  return d;
}

JointDist JointDist::joint(const Eigen::MatrixXd& p) {
  check_law(p);
  JointDist d;
  d.p = p;
  return d;
}

JointDist JointDist::uniform_product(int nx1, int nx2) {
  return product(Eigen::VectorXd::Constant(nx1, 1.0 / nx1), Eigen::VectorXd::Constant(nx2, 1.0 / nx2));
}

double binary_entropy(double p) {
  if (p < 0 || p > 1) throw std::domain_error("binary entropy outside [0,1]");
  return -xlog2x(p) - xlog2x(1 - p);
}

double entropy(const double* p, int size) {
  double h = 0;
  for (int i = 0; i < size; ++i) h -= xlog2x(p[i]);
  return h;
}

namespace {

// Mutual informations for many input laws over one channel.
class MiEvaluator {
 public:
  explicit MiEvaluator(const Channel& w)
      : w_(w), nx1_(w.nx1()), nx2_(w.nx2()), ny_(w.ny()), row_h_(nx1_ * nx2_), py_(ny_), p1y_(nx1_ * ny_),
        p2y_(nx2_ * ny_), px1_(nx1_), px2_(nx2_) {
    for (int i = 0; i < nx1_ * nx2_; ++i) row_h_[i] = entropy(w.matrix().row(i).data(), ny_);
  }

  // p indexed x1 * nx2 + x2.
  MutualInfo operator()(const double* p) {
    std::fill(py_.begin(), py_.end(), 0.0);
    std::fill(p1y_.begin(), p1y_.end(), 0.0);
    std::fill(p2y_.begin(), p2y_.end(), 0.0);
    std::fill(px1_.begin(), px1_.end(), 0.0);
    std::fill(px2_.begin(), px2_.end(), 0.0);
    double h_y_given_x = 0;
    const double* wm = w_.matrix().data();
    for (int x1 = 0; x1 < nx1_; ++x1)
      for (int x2 = 0; x2 < nx2_; ++x2) {
        const int i = x1 * nx2_ + x2;
        const double q = p[i];
        if (q <= 0) continue;
        px1_[x1] += q;
        px2_[x2] += q;
        h_y_given_x += q * row_h_[i];
        const double* row = wm + std::size_t(i) * ny_;
        for (int y = 0; y < ny_; ++y) {
          const double v = q * row[y];
          py_[y] += v;
          p1y_[x1 * ny_ + y] += v;
          p2y_[x2 * ny_ + y] += v;
        }
      }
    const double h_y = entropy(py_.data(), ny_);
    // H(Y|X) = H(X,Y) - H(X)
    const double h_y_x1 = entropy(p1y_.data(), nx1_ * ny_) - entropy(px1_.data(), nx1_);
    const double h_y_x2 = entropy(p2y_.data(), nx2_ * ny_) - entropy(px2_.data(), nx2_);
    MutualInfo mi;
    mi.i12 = std::max(0.0, h_y - h_y_given_x);
    mi.i1_given2 = std::max(0.0, h_y_x2 - h_y_given_x);
    mi.i2_given1 = std::max(0.0, h_y_x1 - h_y_given_x);
    mi.i1 = std::max(0.0, h_y - h_y_x1);
    mi.i2 = std::max(0.0, h_y - h_y_x2);
    return mi;
  }

 private:
  const Channel& w_;
  int nx1_, nx2_, ny_;
  std::vector<double> row_h_, py_, p1y_, p2y_, px1_, px2_;
};

}  // namespace

MutualInfo mutual_informations(const Channel& w, const JointDist& p) {
  if (p.p.rows() != w.nx1() || p.p.cols() != w.nx2()) throw std::invalid_argument("input law shape mismatch");
  check_law(p.p);
  std::vector<double> flat(w.nx1() * w.nx2());
  for (int x1 = 0; x1 < w.nx1(); ++x1)
    for (int x2 = 0; x2 < w.nx2(); ++x2) flat[x1 * w.nx2() + x2] = p.p(x1, x2);
  MiEvaluator eval(w);
  return eval(flat.data());
}

std::string to_string(RateSource s) {
  switch (s) {
    case RateSource::Classical: return "classical";
    case RateSource::Relaxed: return "relaxed";
    case RateSource::ClosedForm: return "closed-form";
    case RateSource::ZeroErrorNs: return "zero-error-ns";
    case RateSource::ZeroErrorRelaxed: return "zero-error-relaxed";
    case RateSource::Concat: return "concat";
  }
  return "unknown";
}

double Frontier::max_sum_rate() const {
  double best = 0;
  for (const auto& p : points) best = std::max(best, p.r1 + p.r2);
  return best;
}

double Frontier::r2_at(double r1) const {
  if (points.empty() || r1 > points.back().r1 + 1e-15) return -1;
  if (r1 <= points.front().r1) return points.front().r2;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (r1 > points[i].r1) continue;
    const auto& a = points[i - 1];
    const auto& b = points[i];
    const double span = b.r1 - a.r1;
    if (span <= 0) return std::max(a.r2, b.r2);
    return a.r2 + (b.r2 - a.r2) * (r1 - a.r1) / span;
  }
  return points.back().r2;
}

Frontier Frontier::sampled(double step) const {
  if (step <= 0) throw std::invalid_argument("sampling step must be positive");
  Frontier out;
  if (points.empty()) return out;
  const double last = points.back().r1;
  const long count = long(std::floor(last / step + 1e-9));
  for (long i = 0; i <= count; ++i) {
    const double r1 = i * step;
    out.points.push_back({r1, r2_at(r1), points.front().source, ""});
  }
  if (out.points.back().r1 < last - 1e-12) out.points.push_back({last, points.back().r2, points.back().source, ""});
  return out;
}

Frontier nondominated(std::vector<RatePoint> pts) {
  std::sort(pts.begin(), pts.end(), [](const RatePoint& a, const RatePoint& b) {
    return a.r1 != b.r1 ? a.r1 > b.r1 : a.r2 > b.r2;
  });
  Frontier f;
  double best_r2 = -std::numeric_limits<double>::infinity();
  for (auto& p : pts) {
    if (p.r2 <= best_r2 + 1e-12) continue;
    best_r2 = p.r2;
    f.points.push_back(std::move(p));
  }
  std::reverse(f.points.begin(), f.points.end());
  return f;
}

Frontier upper_hull(std::vector<RatePoint> pts, RateSource source) {
  Frontier f = nondominated(std::move(pts));
  auto& p = f.points;
  std::vector<RatePoint> hull;
  for (auto& q : p) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      const double cross = (b.r1 - a.r1) * (q.r2 - a.r2) - (b.r2 - a.r2) * (q.r1 - a.r1);
      if (cross >= 0) hull.pop_back();
      else break;
    }
    hull.push_back(std::move(q));
  }
  for (auto& q : hull) q.source = source;
  f.points = std::move(hull);
  return f;
}

void write_frontier_csv(const Frontier& f, std::ostream& out) {
  out << "R1,R2\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& p : f.points) out << p.r1 << ',' << p.r2 << '\n';
}

double Pentagon::sum_rate() const { return std::min(c, a + b); }
RatePoint Pentagon::corner_r1_max() const { return {a, std::max(0.0, std::min(b, c - a))}; }
RatePoint Pentagon::corner_r2_max() const { return {std::max(0.0, std::min(a, c - b)), b}; }

Pentagon pentagon(const MutualInfo& mi) { return {mi.i1_given2, mi.i2_given1, mi.i12}; }

namespace {

// Calls f on every composition of `total` into `parts` nonnegative parts, in lexicographic order.
void for_each_composition(int total, int parts, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> c(parts, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == parts - 1) {
      c[i] = left;
      f(c);
      return;
    }
    for (int v = left; v >= 0; --v) {
      c[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, total);
}

struct HullBins {
  double width;
  std::vector<RatePoint> bins;
  std::vector<char> used;
  HullBins(double r1_max, int count) : width(r1_max / count), bins(count + 1), used(count + 1, 0) {}
  void add(const RatePoint& p) {
    const std::size_t k = std::min(bins.size() - 1, std::size_t(std::max(0.0, p.r1 / width)));
    if (!used[k] || p.r2 > bins[k].r2 || (p.r2 == bins[k].r2 && p.r1 > bins[k].r1)) bins[k] = p, used[k] = 1;
  }
  std::vector<RatePoint> points() const {
    std::vector<RatePoint> out;
    for (std::size_t k = 0; k < bins.size(); ++k)
      if (used[k]) out.push_back(bins[k]);
    return out;
  }
};

// Maximizes f over a simplex-constrained vector by golden-section line searches along e_i - e_j.
double golden_refine(std::vector<double>& x, const std::vector<std::pair<int, int>>& groups, double radius,
                     const std::function<double(const std::vector<double>&)>& f) {
  constexpr double kInvPhi = 0.6180339887498949;
  double best = f(x);
  for (int pass = 0; pass < 3; ++pass)
    for (const auto& [begin, end] : groups)
      for (int i = begin; i < end; ++i)
        for (int j = i + 1; j < end; ++j) {
          // x_i += t, x_j -= t with both staying in [0, 1].
          double lo = std::max(-radius, -x[i]), hi = std::min(radius, x[j]);
          if (hi - lo <= 0) continue;
          auto at = [&](double t) {
            std::vector<double> y = x;
            y[i] += t;
            y[j] -= t;
            return f(y);
          };
          double c = hi - kInvPhi * (hi - lo), d = lo + kInvPhi * (hi - lo);
          double fc = at(c), fd = at(d);
          for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
            if (fc >= fd) {
              hi = d, d = c, fd = fc;
              c = hi - kInvPhi * (hi - lo);
              fc = at(c);
            } else {
              lo = c, c = d, fc = fd;
              d = lo + kInvPhi * (hi - lo);
              fd = at(d);
            }
          }
          const double t = 0.5 * (lo + hi);
          const double ft = at(t);
          if (ft > best) {
            best = ft;
            x[i] += t;
            x[j] -= t;
          }
        }
  return best;
}

RegionResult region_scan(const Channel& w, const RegionOptions& opt, bool product) {
  if (opt.grid < 1) throw std::invalid_argument("grid resolution must be positive");
  const int nx1 = w.nx1(), nx2 = w.nx2(), m = nx1 * nx2;
  MiEvaluator eval(w);
  const double r1_cap = std::min(std::log2(double(nx1)), std::log2(double(w.ny()))) + 1e-9;
  HullBins bins(std::max(r1_cap, 1e-9), opt.hull_bins);
  RegionResult res;
  res.max_sum_rate = -1;
  std::vector<double> flat(m), best_params;
  const RateSource source = product ? RateSource::Classical : RateSource::Relaxed;

  auto consider = [&](const std::vector<double>& params) {
    if (product) {
      for (int x1 = 0; x1 < nx1; ++x1)
        for (int x2 = 0; x2 < nx2; ++x2) flat[x1 * nx2 + x2] = params[x1] * params[nx1 + x2];
    } else {
      std::copy(params.begin(), params.end(), flat.begin());
    }
    const Pentagon pg = pentagon(eval(flat.data()));
    ++res.evaluations;
    auto c1 = pg.corner_r1_max(), c2 = pg.corner_r2_max();
    c1.source = c2.source = source;
    bins.add(c1);
    bins.add(c2);
    if (pg.sum_rate() > res.max_sum_rate) {
      res.max_sum_rate = pg.sum_rate();
      res.best_pentagon = pg;
      best_params = params;
    }
    return pg.sum_rate();
  };

  const double g = opt.grid;
  std::vector<double> params(product ? nx1 + nx2 : m);
  if (product) {
    std::vector<std::vector<double>> side2;
    for_each_composition(opt.grid, nx2, [&](const std::vector<int>& c) {
      std::vector<double> v(nx2);
      for (int i = 0; i < nx2; ++i) v[i] = c[i] / g;
      side2.push_back(std::move(v));
    });
    for_each_composition(opt.grid, nx1, [&](const std::vector<int>& c) {
      for (int i = 0; i < nx1; ++i) params[i] = c[i] / g;
      for (const auto& v : side2) {
        std::copy(v.begin(), v.end(), params.begin() + nx1);
        consider(params);
      }
    });
  } else {
    for_each_composition(opt.grid, m, [&](const std::vector<int>& c) {
      for (int i = 0; i < m; ++i) params[i] = c[i] / g;
      consider(params);
    });
  }

  if (opt.refine && !best_params.empty()) {
    std::vector<std::pair<int, int>> groups;
    if (product) groups = {{0, nx1}, {nx1, nx1 + nx2}};
    else groups = {{0, m}};
    std::vector<double> x = best_params;
    golden_refine(x, groups, 1.0 / g, consider);
  }

  const auto& bp = best_params;
  if (product) {
    Eigen::VectorXd p1(nx1), p2(nx2);
    for (int i = 0; i < nx1; ++i) p1[i] = bp[i];
    for (int i = 0; i < nx2; ++i) p2[i] = bp[nx1 + i];
    p1 /= p1.sum();
    p2 /= p2.sum();
    res.best = JointDist::product(p1, p2);
  } else {
    Eigen::MatrixXd p(nx1, nx2);
    for (int x1 = 0; x1 < nx1; ++x1)
      for (int x2 = 0; x2 < nx2; ++x2) p(x1, x2) = bp[x1 * nx2 + x2];
    res.best = JointDist::joint(p / p.sum());
  }
  auto pts = bins.points();
  auto c1 = res.best_pentagon.corner_r1_max(), c2 = res.best_pentagon.corner_r2_max();
  c1.source = c2.source = source;
  pts.push_back(c1);
  pts.push_back(c2);
  res.frontier = upper_hull(std::move(pts), source);
  return res;
}

}  // namespace

RegionResult classical_region(const Channel& w, const RegionOptions& options) {
  return region_scan(w, options, true);
}

RegionResult relaxed_region(const Channel& w, const RegionOptions& options) {
  return region_scan(w, options, false);
}

RegionBounds bac_relaxed_closed_form(double q) {
  if (!(q >= 0.5 - 1e-15 && q <= 2.0 / 3 + 1e-15)) throw std::domain_error("q must lie in [1/2, 2/3]");
  const double h = binary_entropy(q);
  return {h, h, q + h};
}

RegionResult bac_relaxed_closed_form_region(int steps) {
  if (steps < 1) throw std::invalid_argument("need at least one step");
  RegionResult res;
  res.max_sum_rate = -1;
  std::vector<RatePoint> pts;
  for (int s = 0; s <= steps; ++s) {
    const double q = 0.5 + (2.0 / 3 - 0.5) * s / steps;
    const auto b = bac_relaxed_closed_form(std::min(q, 2.0 / 3));
    const Pentagon pg{b.r1, b.r2, b.sum};
    pts.push_back(pg.corner_r1_max());
    pts.push_back(pg.corner_r2_max());
    ++res.evaluations;
    if (pg.sum_rate() > res.max_sum_rate) res.max_sum_rate = pg.sum_rate(), res.best_pentagon = pg;
  }
  res.frontier = upper_hull(std::move(pts), RateSource::ClosedForm);
  return res;
}

double beta_hypothesis(const std::vector<double>& p0, const std::vector<double>& p1, double eps) {
  if (p0.size() != p1.size()) throw std::invalid_argument("distributions on different spaces");
  if (eps < 0 || eps > 1) throw std::domain_error("eps must lie in [0,1]");
  LinearProgram<double> lp;
  lp.maximize = false;
  LpRow<double> row;
  for (std::size_t r = 0; r < p0.size(); ++r) {
    const int j = lp.add_variable(p1[r], 0.0, 1.0);
    row.index.push_back(j);
    row.value.push_back(p0[r]);
  }
  row.relation = Relation::GreaterEqual;
  row.rhs = 1 - eps;
  lp.add_row(std::move(row));
  const auto sol = solve(lp);
  if (sol.status != LpStatus::Optimal) throw std::runtime_error("hypothesis test program not solved: " + to_string(sol.status));
  return sol.value;
}

RegionBounds one_shot_converse(const Channel& w, const JointDist& p, double eps) {
  if (eps < 0 || eps >= 1) throw std::domain_error("eps must lie in [0,1)");
  const auto mi = mutual_informations(w, p);
  const double h = binary_entropy(eps), scale = 1 / (1 - eps);
  return {(mi.i1_given2 + h) * scale, (mi.i2_given1 + h) * scale, (mi.i12 + h) * scale};
}

}  // namespace nsmac
