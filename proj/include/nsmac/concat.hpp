#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "nsmac/capacity.hpp"
#include "nsmac/ns_programs.hpp"

namespace nsmac {

/// Aggregate success masses of a code and the four transition values of the induced channel:
/// a (both right), b (only j1 wrong), c (only j2 wrong), d (both wrong).
struct InducedChannelStats {
  int k1 = 0, k2 = 0;
  double A = 0, B1 = 0, B2 = 0;
  double a = 0, b = 0, c = 0, d = 0;
  double row_sum() const;
};

/// Builds the stats from a code on `orbits` of the channel w; small negative values are clamped.
InducedChannelStats induced_stats(const Channel& w, const MacOrbits& orbits, const NsCode& code);

/// Stats directly from (A, B1, B2).
InducedChannelStats stats_from_masses(int k1, int k2, double A, double B1, double B2);

struct InducedInfo {
  double h_j = 0;          // H(J)
  double i12 = 0;          // I((I1,I2):J)
  double i1_given2 = 0;    // I(I1:J|I2)
  double i2_given1 = 0;    // I(I2:J|I1)
  double i1 = 0, i2 = 0;   // I(I1:J), I(I2:J)
};

/// Mutual informations of the induced channel under uniform messages.
InducedInfo induced_info(const InducedChannelStats& s);

/// Corner points (I(I1:J|I2)/n, I(I2:J)/n) and (I(I1:J)/n, I(I2:J|I1)/n).
std::pair<RatePoint, RatePoint> corner_rates(const InducedChannelStats& s, int n);

/// Full transition matrix of the structured induced channel; outputs indexed j1 * k2 + j2.
Channel structured_induced_channel(const InducedChannelStats& s);

/// W[P](j|i1 i2) = sum_{x,y} W(y|x1 x2) P(x1 x2 j | i1 i2 y) from an explicit box over the n-fold channel.
Channel induced_channel_explicit(const Box& box, const Channel& wn);

struct ConcatCell {
  int k1 = 0, k2 = 0;
  LpStatus status = LpStatus::IterationLimit;
  std::string error;
  double value = 0;
  InducedChannelStats stats;
  RatePoint corner1, corner2;
  double seconds = 0;
  long iterations = 0;
  bool ok() const { return error.empty() && status == LpStatus::Optimal; }
};

struct ConcatScan {
  int n = 0;
  std::vector<ConcatCell> cells;  // in scan order
  Frontier frontier;              // nondominated corner points
  double best_sum_rate = 0;
};

/// All pairs of the two ranges, k1 outer and k2 inner.
std::vector<std::pair<int, int>> grid_cells(int k1_lo, int k1_hi, int k2_lo, int k2_hi);

/// Pairs with lo <= k1, k2 <= hi and |k1 - k2| <= width, k1 outer.
std::vector<std::pair<int, int>> diagonal_cells(int lo, int hi, int width);

struct ConcatOptions {
  SolveOptions solve = default_solve_options();
  int threads = 1;
  bool verbose = false;
};

ConcatScan concat_scan(const Channel& w, int n, const std::vector<std::pair<int, int>>& cells,
                       const ConcatOptions& options = {});

void write_concat_json(const ConcatScan& scan, std::ostream& out);

}  // namespace nsmac
