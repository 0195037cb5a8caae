#include "test_main.hpp"

#include <cmath>

#include "nsmac/ns_programs.hpp"
#include "support.hpp"

using namespace nsmac;

namespace {

double lp_value(const LinearProgram<double>& lp) {
  const auto s = solve(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(max_violation(lp, s.primal) <= 1e-8);
  return s.value;
}

double ns_value(const Channel& w, int n, int k1, int k2) {
  const auto r = solve_ns(w, n, k1, k2);
  REQUIRE(r.status == LpStatus::Optimal);
  return r.value;
}

}  // namespace

TEST_CASE("element program on the adder channel") {
  const double v = lp_value(build_ns_lp_element(make_bac(), 2, 2));
  CHECK(v == doctest::Approx(brute_force_success(make_bac(), 2, 2, Objective::Joint).value));
  CHECK(solve(build_ns_lp_element(make_bac<Rational>(), 2, 2)).value == Rational(3, 4));
}

TEST_CASE("one message pair is always decoded") {
  std::mt19937 rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    const auto w = testing::random_channel(rng, 2, 3, 2);
    CHECK(lp_value(build_ns_lp_element(w, 1, 1)) == doctest::Approx(1.0));
    CHECK(lp_value(build_relaxed_lp_element(w, 1, 1)) == doctest::Approx(1.0));
  }
}

TEST_CASE("assistance never hurts") {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto w = testing::random_channel(rng, 2, 2, 2);
    for (auto [k1, k2] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}})
      CHECK(lp_value(build_ns_lp_element(w, k1, k2)) >=
            brute_force_success(w, k1, k2, Objective::Joint).value - 1e-9);
  }
}

TEST_CASE("orbit program sizes") {
  const auto bac = make_bac();
  const MacOrbits o2(2, 2, 3, 2), o3(2, 2, 3, 3);
  const auto lp2 = build_ns_lp_orbit(bac, o2, 2, 3);
  CHECK(lp2.num_vars() == 244);
  CHECK(lp2.num_rows() == 480);
  const auto lp3 = build_ns_lp_orbit(bac, o3, 4, 5);
  CHECK(lp3.num_vars() == 1112);
  CHECK(lp3.num_rows() == 2054);
}

TEST_CASE("orbit program equals the element program on tensor powers") {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 6; ++trial) {
    const auto w = testing::random_channel(rng, 2, 2, 2 + trial % 2);
    for (int n = 1; n <= 2; ++n) {
      const MacOrbits o(2, 2, w.ny(), n);
      const auto wn = tensor_power(w, n);
      const int k1 = 2 + trial % 2, k2 = 2;
      CHECK(lp_value(build_ns_lp_orbit(w, o, k1, k2)) ==
            doctest::Approx(lp_value(build_ns_lp_element(wn, k1, k2))).epsilon(1e-7));
      CHECK(lp_value(build_relaxed_lp_orbit(w, o, k1, k2)) ==
            doctest::Approx(lp_value(build_relaxed_lp_element(wn, k1, k2))).epsilon(1e-7));
      CHECK(lp_value(build_ns_lp_orbit_compact(w, o, k1, k2)) ==
            doctest::Approx(lp_value(build_ns_lp_orbit(w, o, k1, k2))).epsilon(1e-9));
      CHECK(lp_value(build_ns_lp_orbit_compact(w, o, k1, k2, Objective::Sum)) ==
            doctest::Approx(lp_value(build_ns_lp_orbit(w, o, k1, k2, Objective::Sum))).epsilon(1e-9));
    }
  }
}

TEST_CASE("zero-error code on three copies of the adder channel") {
  const auto r = solve_ns(make_bac(), 3, 4, 5);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
  const MacOrbits o(2, 2, 3, 3);
  CHECK(certify_program(Program::NonSignaling, make_bac<Rational>(), o, 4, 5, SolveMode::Exact).verdict ==
        Certificate::CertifiedExactOne);
}

TEST_CASE("sandwich bounds") {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 8; ++trial) {
    const auto w = testing::random_channel(rng, 2, 2, 3);
    for (int k1 = 1; k1 <= 3; ++k1)
      for (int k2 = 1; k2 <= 3; ++k2) {
        const double v = ns_value(w, 1, k1, k2);
        const double upper = std::min({2.0 / k1, 2.0 / k2, 3.0 / (k1 * k2)});
        CHECK(v >= 1.0 / (k1 * k2) - 1e-9);
        CHECK(v <= upper + 1e-9);
      }
  }
}

TEST_CASE("monotone in message counts") {
  for (int n = 1; n <= 2; ++n)
    for (int k1 = 1; k1 <= 4; ++k1)
      for (int k2 = 1; k2 <= 4; ++k2) {
        const double v = ns_value(make_bac(), n, k1, k2);
        if (k1 > 1) CHECK(ns_value(make_bac(), n, k1 - 1, k2) >= v - 1e-9);
        if (k2 > 1) CHECK(ns_value(make_bac(), n, k1, k2 - 1) >= v - 1e-9);
      }
}

TEST_CASE("supermultiplicativity") {
  std::mt19937 rng(6);
  for (int trial = 0; trial < 4; ++trial) {
    const auto a = testing::random_channel(rng, 2, 2, 2), b = testing::random_channel(rng, 2, 2, 2);
    const double va = lp_value(build_ns_lp_element(a, 2, 2)), vb = lp_value(build_ns_lp_element(b, 2, 1));
    const double vab = lp_value(build_ns_lp_element(tensor(a, b), 4, 2));
    CHECK(vab >= va * vb - 1e-9);
  }
}

TEST_CASE("relaxed program dominates") {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 6; ++trial) {
    const auto w = testing::random_channel(rng, 2, 2, 3);
    const MacOrbits o(2, 2, 3, 1 + trial % 2);
    for (auto [k1, k2] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{3, 4}}) {
      const double ns = ns_value(w, o.n, k1, k2);
      const auto relaxed = solve_relaxed(w, o, k1, k2);
      REQUIRE(relaxed.status == LpStatus::Optimal);
      CHECK(relaxed.value >= ns - 1e-9);
    }
  }
  const MacOrbits one(2, 2, 3, 1);
  CHECK(solve_relaxed(make_bac(), one, 1, 1).value == doctest::Approx(1.0));
}

TEST_CASE("noisy adder channel has no zero-error codes") {
  const auto w = make_noisy_bac<Rational>(Rational(1, 1000), Rational(1, 1000));
  for (int n = 1; n <= 2; ++n) {
    const MacOrbits o(2, 2, 3, n);
    for (auto [k1, k2] : {std::pair{1, 2}, std::pair{2, 1}, std::pair{2, 2}})
      CHECK(certify_program(Program::NonSignaling, w, o, k1, k2, SolveMode::Exact).verdict == Certificate::BelowOne);
    CHECK(certify_program(Program::NonSignaling, w, o, 1, 1, SolveMode::Exact).verdict ==
          Certificate::CertifiedExactOne);
  }
}

TEST_CASE("codes satisfy the orbit program and survive serialization") {
  const auto w = make_noisy_bac(0.05, 0.1);
  const MacOrbits o(2, 2, 3, 2);
  const auto r = solve_ns(w, o, 3, 2);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(code_residual(w, o, r.code) <= 1e-8);
  CHECK(r.code.value == doctest::Approx(r.value).epsilon(1e-12));
  for (const auto* v : {&r.code.r, &r.code.r1, &r.code.r2, &r.code.p})
    for (double x : *v) CHECK(x >= -1e-9);
  const auto back = parse_code(serialize_code(r.code));
  CHECK(back.r == r.code.r);
  CHECK(back.p == r.code.p);
  CHECK(back.channel_hash == channel_hash(w));
  CHECK(back.value == r.code.value);
  CHECK_THROWS(parse_code("garbage"));
}

TEST_CASE("reconstructed box on one copy") {
  const auto r = solve_ns(make_bac(), 1, 2, 2);
  const auto box = reconstruct_box(r.code);
  const auto rep = check_box(box, make_bac());
  CHECK(std::abs(rep.success - 0.75) <= 1e-9);
  CHECK(rep.max_ns_residual() <= 1e-9);
  CHECK(rep.normalization <= 1e-9);
  CHECK(rep.min_entry >= -1e-9);
}

TEST_CASE("reconstructed boxes on random channels and two copies") {
  std::mt19937 rng(10);
  for (int trial = 0; trial < 5; ++trial) {
    const auto w = testing::random_channel(rng, 2, 2, 3);
    const int n = 1 + trial % 2;
    const auto r = solve_ns(w, n, 2 + trial % 3, 2 + trial % 2);
    REQUIRE(r.status == LpStatus::Optimal);
    const auto rep = check_box(reconstruct_box(r.code), tensor_power(w, n));
    CHECK(std::abs(rep.success - r.value) <= 1e-9);
    CHECK(rep.max_ns_residual() <= 1e-9);
    CHECK(rep.normalization <= 1e-9);
  }
}

TEST_CASE("single message box is deterministic success") {
  NsCode c;
  c.nx1 = 1, c.nx2 = 1, c.ny = 1, c.n = 1, c.k1 = 1, c.k2 = 1;
  c.r = c.r1 = c.r2 = {1.0};
  c.p = {1.0};
  const auto box = reconstruct_box(c);
  REQUIRE(box.data.size() == 1);
  CHECK(box.data[0] == 1.0);
}

TEST_CASE("independent assistance heuristic") {
  const auto bac = make_bac();
  CHECK(indep_ns_sum(bac, 1, 1).value == doctest::Approx(1.0));
  const auto s = indep_ns_sum(bac, 2, 2);
  CHECK(s.value >= brute_force_success(bac, 2, 2, Objective::Sum).value - 1e-12);
  CHECK(s.value == doctest::Approx(indep_ns_value(bac, s)));
  CHECK(s.value <= lp_value(build_ns_lp_element(bac, 2, 2, Objective::Sum)) + 1e-9);
  std::mt19937 rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    const auto w = testing::random_channel(rng, 2, 2, 3);
    const auto st = indep_ns_sum(w, 2, 3);
    for (int y = 0; y < 3; ++y) {
      double a = 0, b = 0;
      for (int x = 0; x < 2; ++x) a += st.r1[x * 3 + y], b += st.r2[x * 3 + y];
      CHECK(a == doctest::Approx(1.0));
      CHECK(b == doctest::Approx(1.0));
    }
    CHECK(st.p1[0] + st.p1[1] == doctest::Approx(2.0));
    CHECK(st.p2[0] + st.p2[1] == doctest::Approx(3.0));
    CHECK(st.value <= lp_value(build_ns_lp_element(w, 2, 3, Objective::Sum)) + 1e-9);
    CHECK(st.value >= brute_force_success(w, 2, 3, Objective::Sum).value - 1e-12);
  }
}

TEST_CASE("independent assistance inequality") {
  CHECK(nssr_factor(2, 2) == doctest::Approx(0.75));
  CHECK(nssr_factor(3, 1) == doctest::Approx(1.0));
  CHECK(check_nssr_inequality(make_bac(), 2, 2, 2, 2).holds);
  const auto rep = check_nssr_inequality(make_bac(), 3, 2, 1, 1);
  CHECK(rep.rhs == doctest::Approx(1.0));
  CHECK(rep.holds);
}
