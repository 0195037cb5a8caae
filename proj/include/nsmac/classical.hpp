#pragma once

#include <cstdint>
#include <vector>

#include "nsmac/channel.hpp"

namespace nsmac {

enum class Objective { Joint, Sum };

/// Deterministic code. For the joint objective d1/d2 hold the two coordinates of d(y).
struct CodeTables {
  std::vector<int> e1, e2;
  std::vector<int> d1, d2;
};

struct ClassicalResult {
  double value = 0;
  CodeTables code;
};

/// Default work budget for exhaustive searches (elementary channel lookups).
inline constexpr std::uint64_t kDefaultBruteForceBudget = 2'000'000'000ULL;

/// Thrown when an exhaustive search would exceed its budget.
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact optimum of the unassisted success probability over deterministic codes.
ClassicalResult brute_force_success(const Channel& w, int k1, int k2, Objective objective,
                                    std::uint64_t budget = kDefaultBruteForceBudget);

/// Success probability of a given deterministic code.
double evaluate_code(const Channel& w, const CodeTables& code, Objective objective);

/// (1/k) max over input subsets S with |S| <= k of sum_y max_{x in S} W(y|x).
double p2p_success(const P2PChannel& w, int k, std::uint64_t budget = kDefaultBruteForceBudget);

}  // namespace nsmac
