#include "test_main.hpp"

#include <cmath>

#include "nsmac/frontier.hpp"

using namespace nsmac;

namespace {

ScanConfig config(const std::string& channel, int n, int k1_lo, int k1_hi) {
  ScanConfig cfg;
  cfg.channel_source = channel;
  cfg.channel = named_channel(channel);
  cfg.n = n;
  cfg.certify = ScanConfig::default_certify(n);
  cfg.k1_lo = k1_lo;
  cfg.k1_hi = k1_hi;
  return cfg;
}

// Linear scan over k2 with plain float solves.
int linear_max_k2(const Channel& w, Program program, int n, int k1, int k2_top) {
  const MacOrbits orbits(w.nx1(), w.nx2(), w.ny(), n);
  int best = 0;
  for (int k2 = 1; k2 <= k2_top; ++k2) {
    double v = 0;
    if (program == Program::NonSignaling) {
      const auto r = solve_ns(w, orbits, k1, k2);
      REQUIRE(r.status == LpStatus::Optimal);
      v = r.value;
    } else {
      const auto r = solve_relaxed(w, orbits, k1, k2);
      REQUIRE(r.status == LpStatus::Optimal);
      v = r.value;
    }
    if (v >= 1 - 1e-7) best = k2;
  }
  return best;
}

}  // namespace

TEST_CASE("named channels") {
  CHECK(named_channel("bac").matrix() == make_bac<Rational>().matrix());
  CHECK(named_channel("noisy-bac").matrix() == make_noisy_bac(Rational(1, 1000), Rational(1, 1000)).matrix());
  CHECK(named_channel("noisy-bac:1/10,1/5").matrix() == make_noisy_bac(Rational(1, 10), Rational(1, 5)).matrix());
  CHECK_THROWS(named_channel("erasure"));
  CHECK_THROWS(load_channel("/nonexistent/channel.txt"));
}

TEST_CASE("config validation") {
  auto cfg = config("bac", 1, 1, 2);
  CHECK_NOTHROW(cfg.validate());
  cfg.tol = 0;
  CHECK_THROWS(cfg.validate());
  cfg.tol = 2e-3;
  CHECK_THROWS(cfg.validate());
  cfg = config("bac", 1, 3, 2);
  CHECK_THROWS(cfg.validate());
  CHECK(ScanConfig::default_certify(4) == SolveMode::Exact);
  CHECK(ScanConfig::default_certify(5) == SolveMode::Float);
}

TEST_CASE("adder channel at one use") {
  const auto scan = zero_error_frontier(config("bac", 1, 1, 2));
  REQUIRE(scan.rows.size() == 2);
  CHECK(scan.rows[0].max_k2 == 2);
  CHECK(scan.rows[1].max_k2 == 1);
  REQUIRE(scan.frontier.points.size() == 2);
  CHECK(scan.frontier.points[0].r1 == 0);
  CHECK(scan.frontier.points[0].r2 == 1);
  CHECK(scan.frontier.points[1].r1 == 1);
  CHECK(scan.frontier.points[1].r2 == 0);
}

TEST_CASE("binary search matches a linear scan") {
  const auto w = make_bac();
  for (auto program : {Program::NonSignaling, Program::Relaxed}) {
    auto cfg = config("bac", 2, 1, 4);
    cfg.program = program;
    const auto scan = zero_error_frontier(cfg);
    for (const auto& row : scan.rows) {
      REQUIRE(row.ok());
      CHECK(row.max_k2 == linear_max_k2(w, program, 2, row.k1, 4));
    }
  }
}

TEST_CASE("adder channel at three uses") {
  auto cfg = config("bac", 3, 3, 5);
  const auto ns = zero_error_frontier(cfg);
  cfg.program = Program::Relaxed;
  const auto relaxed = zero_error_frontier(cfg);
  bool found = false;
  for (const auto& p : ns.frontier.points)
    found |= std::abs(p.r1 - 2.0 / 3) < 1e-12 && std::abs(p.r2 - std::log2(5.0) / 3) < 1e-12;
  CHECK(found);
  for (std::size_t i = 0; i < ns.rows.size(); ++i) {
    REQUIRE(ns.rows[i].ok());
    REQUIRE(relaxed.rows[i].ok());
    CHECK(relaxed.rows[i].max_k2 >= ns.rows[i].max_k2);
    if (i > 0) CHECK(ns.rows[i].max_k2 <= ns.rows[i - 1].max_k2);
    if (i > 0) CHECK(relaxed.rows[i].max_k2 <= relaxed.rows[i - 1].max_k2);
  }
}

TEST_CASE("noisy adder channel has only the trivial point") {
  for (int n : {1, 2}) {
    auto cfg = config("noisy-bac", n, 1, 1 << n);
    const auto scan = zero_error_frontier(cfg);
    REQUIRE(scan.frontier.points.size() == 1);
    CHECK(scan.frontier.points[0].r1 == 0);
    CHECK(scan.frontier.points[0].r2 == 0);
    for (std::size_t i = 1; i < scan.rows.size(); ++i) CHECK(scan.rows[i].max_k2 == 0);
  }
}

TEST_CASE("threaded scans are deterministic") {
  auto cfg = config("bac", 2, 1, 4);
  cfg.certify = SolveMode::Float;
  const auto a = zero_error_frontier(cfg);
  cfg.threads = 3;
  const auto b = zero_error_frontier(cfg);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].k1 == b.rows[i].k1);
    CHECK(a.rows[i].max_k2 == b.rows[i].max_k2);
  }
}
