#pragma once

#include <string>
#include <vector>

#include "nsmac/capacity.hpp"
#include "nsmac/ns_programs.hpp"

namespace nsmac {

/// "bac", "noisy-bac" (flip probability 1/1000 on both inputs) or "noisy-bac:EPS1,EPS2".
ExactChannel named_channel(const std::string& name);

/// Named channel when `source` is a known name, else a channel file path.
ExactChannel load_channel(const std::string& source);

struct ScanConfig {
  std::string channel_source = "bac";
  ExactChannel channel;
  int n = 1;
  Program program = Program::NonSignaling;
  SolveMode certify = SolveMode::Exact;
  double tol = 1e-7;
  int k1_lo = 1, k1_hi = 1;
  int k2_max = 0;  // 0 means |X2|^n
  int threads = 1;
  SolveOptions solve = default_solve_options();
  bool verbose = false;

  /// Exact certification up to n = 4, float above.
  static SolveMode default_certify(int n) { return n <= 4 ? SolveMode::Exact : SolveMode::Float; }
  void validate() const;
};

struct ZeroErrorRow {
  int k1 = 0;
  int max_k2 = 0;  // 0 when even k2 = 1 fails
  int solves = 0;
  double seconds = 0;
  std::string diagnostic;  // set when a solve failed and the search for this k1 stopped
  bool ok() const { return diagnostic.empty(); }
};

struct ZeroErrorScan {
  std::vector<ZeroErrorRow> rows;  // sorted by k1
  Frontier frontier;               // (log2 k1 / n, log2 max_k2 / n) for rows with max_k2 >= 1
};

/// Largest k2 with certified S = 1 for every k1 in range, by binary search over k2.
ZeroErrorScan zero_error_frontier(const ScanConfig& cfg);

/// One certification call of the configured program at (k1, k2).
CertifyResult certify_cell(const ScanConfig& cfg, const MacOrbits& orbits, int k1, int k2);

}  // namespace nsmac
