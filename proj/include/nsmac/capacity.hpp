#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nsmac/channel.hpp"

namespace nsmac {

/// Input law P(x1, x2) on X1 x X2, optionally carrying its product factors.
struct JointDist {
  Eigen::MatrixXd p;  // nx1 x nx2
  bool product_form = false;
  Eigen::VectorXd p1, p2;

  static JointDist product(const Eigen::VectorXd& p1, const Eigen::VectorXd& p2);
  static JointDist joint(const Eigen::MatrixXd& p);
  static JointDist uniform_product(int nx1, int nx2);
};

/// Mutual informations in bits.
struct MutualInfo {
  double i1_given2 = 0;  // I(X1:Y|X2)
  double i2_given1 = 0;  // I(X2:Y|X1)
  double i12 = 0;        // I((X1,X2):Y)
  double i1 = 0;         // I(X1:Y)
  double i2 = 0;         // I(X2:Y)
};

/// Binary entropy in bits with h(0) = h(1) = 0.
double binary_entropy(double p);

/// Shannon entropy in bits of a nonnegative vector summing to one.
double entropy(const double* p, int size);

MutualInfo mutual_informations(const Channel& w, const JointDist& p);

enum class RateSource { Classical, Relaxed, ClosedForm, ZeroErrorNs, ZeroErrorRelaxed, Concat };
std::string to_string(RateSource s);

struct RatePoint {
  double r1 = 0, r2 = 0;
  RateSource source = RateSource::Classical;
  std::string params;
};

/// Nondominated upper-right boundary of a convex rate region, sorted by increasing R1.
struct Frontier {
  std::vector<RatePoint> points;
  double max_sum_rate() const;
  /// Largest R2 on the boundary at the given R1, by linear interpolation; -1 outside.
  double r2_at(double r1) const;
  /// Points at R1 = 0, step, 2 step, ... up to the largest R1.
  Frontier sampled(double step) const;
};

/// Upper-right convex hull of a point set, nondominated part only.
Frontier upper_hull(std::vector<RatePoint> points, RateSource source);

/// Nondominated points without convexification, sorted by R1.
Frontier nondominated(std::vector<RatePoint> points);

void write_frontier_csv(const Frontier& f, std::ostream& out);

/// Pentagon {R1 <= a, R2 <= b, R1 + R2 <= c}.
struct Pentagon {
  double a = 0, b = 0, c = 0;
  double sum_rate() const;
  RatePoint corner_r1_max() const;  // (a, min(b, c - a))
  RatePoint corner_r2_max() const;  // (min(a, c - b), b)
};
Pentagon pentagon(const MutualInfo& mi);

struct RegionOptions {
  int grid = 512;        // simplex coordinates are multiples of 1/grid
  bool refine = true;    // golden-section pass around the best sum-rate grid point
  int hull_bins = 8192;  // R1 bins feeding the hull
};

struct RegionResult {
  Frontier frontier;
  double max_sum_rate = 0;
  JointDist best;
  Pentagon best_pentagon;
  long evaluations = 0;
};

/// Union of pentagons over product input laws on a grid, convexified.
RegionResult classical_region(const Channel& w, const RegionOptions& options = {});

/// Union of pentagons over all joint input laws on a grid, convexified.
RegionResult relaxed_region(const Channel& w, const RegionOptions& options = {});

struct RegionBounds {
  double r1 = 0, r2 = 0, sum = 0;
};

/// (h(q), h(q), q + h(q)) for q in [1/2, 2/3].
RegionBounds bac_relaxed_closed_form(double q);

/// Union of the closed-form pentagons over q sampled with the given number of steps.
RegionResult bac_relaxed_closed_form_region(int steps = 4096);

/// min sum_r T_r P1(r) subject to sum_r T_r P0(r) >= 1 - eps, 0 <= T <= 1.
double beta_hypothesis(const std::vector<double>& p0, const std::vector<double>& p1, double eps);

/// Caps on log2 k1, log2 k2 and log2 k1k2 for a code with success 1 - eps.
RegionBounds one_shot_converse(const Channel& w, const JointDist& p, double eps);

}  // namespace nsmac
