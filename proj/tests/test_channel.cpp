#include "test_main.hpp"

#include <functional>

#include "nsmac/classical.hpp"
#include "support.hpp"

using namespace nsmac;

namespace {

// Exhaustive search over every encoder and every decoder table, joint objective.
double naive_joint(const Channel& w, int k1, int k2) {
  const int ny = w.ny(), kk = k1 * k2;
  double best = 0;
  std::vector<int> e1(k1, 0), e2(k2, 0), d(ny, 0);
  std::function<void(int)> over_d = [&](int y) {
    if (y == ny) {
      double s = 0;
      for (int i1 = 0; i1 < k1; ++i1)
        for (int i2 = 0; i2 < k2; ++i2)
          for (int yy = 0; yy < ny; ++yy)
            if (d[yy] == i1 * k2 + i2) s += w(e1[i1], e2[i2], yy);
      best = std::max(best, s / kk);
      return;
    }
    for (int v = 0; v < kk; ++v) d[y] = v, over_d(y + 1);
  };
  std::function<void(int)> over_e = [&](int i) {
    if (i == k1 + k2) return over_d(0);
    const int nx = i < k1 ? w.nx1() : w.nx2();
    for (int x = 0; x < nx; ++x) {
      if (i < k1) e1[i] = x;
      else e2[i - k1] = x;
      over_e(i + 1);
    }
  };
  over_e(0);
  return best;
}

}  // namespace

TEST_CASE("adder channel transitions") {
  const auto w = make_bac();
  CHECK(w(0, 0, 0) == 1);
  CHECK(w(0, 1, 1) == 1);
  CHECK(w(1, 0, 1) == 1);
  CHECK(w(1, 1, 2) == 1);
  CHECK(w(0, 0, 1) == 0);
  CHECK(w(1, 1, 0) == 0);
  for (int i = 0; i < 4; ++i) CHECK(w.matrix().row(i).sum() == doctest::Approx(1.0));
}

TEST_CASE("adder channel symmetric under joint input flip") {
  const auto w = make_bac();
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2)
      for (int y = 0; y < 3; ++y) CHECK(w(x1, x2, y) == w(1 - x1, 1 - x2, 2 - y));
}

TEST_CASE("noisy adder channel") {
  CHECK(make_noisy_bac(0.0, 0.0) == make_bac());
  const auto w = make_noisy_bac(1e-3, 1e-3);
  CHECK(w(0, 0, 0) == doctest::Approx(0.999 * 0.999).epsilon(1e-15));
  const auto flipped = make_noisy_bac(1.0, 1.0);
  const auto bac = make_bac();
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2)
      for (int y = 0; y < 3; ++y) CHECK(flipped(x1, x2, y) == bac(1 - x1, 1 - x2, y));
  for (int i = 0; i < 4; ++i) CHECK(std::abs(w.matrix().row(i).sum() - 1) < 1e-12);
  CHECK_THROWS_AS(make_noisy_bac(-0.1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_noisy_bac(0.0, 1.5), std::invalid_argument);
  const auto exact = make_noisy_bac<Rational>(Rational(1, 1000), Rational(1, 1000));
  CHECK(exact(0, 0, 0) == Rational(998001, 1000000));
}

TEST_CASE("channel validation") {
  Channel::Matrix m(1, 2);
  m << 0.5, 0.6;
  CHECK_THROWS_AS(Channel(1, 1, 2, m), std::invalid_argument);
  m << -0.5, 1.5;
  CHECK_THROWS_AS(Channel(1, 1, 2, m), std::invalid_argument);
  CHECK_THROWS_AS(Channel(2, 1, 2, m), std::invalid_argument);
}

TEST_CASE("tensor product") {
  const auto w = make_bac();
  const auto ww = tensor(w, w);
  CHECK(ww.nx1() == 4);
  CHECK(ww.nx2() == 4);
  CHECK(ww.ny() == 9);
  std::mt19937 rng(7);
  const auto a = testing::random_channel(rng, 2, 3, 2), b = testing::random_channel(rng, 3, 2, 3);
  const auto ab = tensor(a, b);
  std::uniform_int_distribution<int> pick(0, 1 << 20);
  for (int trial = 0; trial < 50; ++trial) {
    const int x1 = pick(rng) % 2, u1 = pick(rng) % 3, x2 = pick(rng) % 3, u2 = pick(rng) % 2;
    const int y = pick(rng) % 2, v = pick(rng) % 3;
    CHECK(ab(x1 * 3 + u1, x2 * 2 + u2, y * 3 + v) == doctest::Approx(a(x1, x2, y) * b(u1, u2, v)));
  }
  for (int i = 0; i < ab.matrix().rows(); ++i) CHECK(std::abs(ab.matrix().row(i).sum() - 1) < 1e-12);
  CHECK(tensor(w, testing::point_channel(1, 1)) == w);
}

TEST_CASE("channel file round trip") {
  const auto text = format_channel(make_noisy_bac<Rational>(Rational(1, 3), Rational(1, 7)));
  const auto back = parse_channel(text);
  CHECK(back == make_noisy_bac<Rational>(Rational(1, 3), Rational(1, 7)));
  const auto w = parse_channel("# adder\nnx1 2\nnx2 2\nny 3\n0 0 0 1\n0 1 1 1\n1 0 1 1.0\n1 1 2 1/1\n");
  CHECK(w == make_bac<Rational>());
  CHECK_THROWS(parse_channel("nx1 2\nnx2 2\nny 3\n0 0 0 1\n"));
}

TEST_CASE("brute force on the adder channel") {
  CHECK(brute_force_success(make_bac(), 2, 2, Objective::Joint).value == doctest::Approx(naive_joint(make_bac(), 2, 2)));
  CHECK(brute_force_success(make_bac(), 2, 2, Objective::Joint).value == doctest::Approx(0.75));
  CHECK(brute_force_success(make_bac(), 1, 1, Objective::Joint).value == doctest::Approx(1.0));
  const double sum = brute_force_success(make_bac(), 2, 2, Objective::Sum).value;
  const double joint = 0.75;
  CHECK(sum >= 0.75 - 1e-12);
  CHECK(1 - sum <= 1 - joint + 1e-12);
  CHECK(1 - joint <= 2 * (1 - sum) + 1e-12);
}

TEST_CASE("brute force matches naive search and reports a valid code") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto w = testing::random_channel(rng, 2, 2, 3);
    for (auto [k1, k2] : {std::pair{2, 2}, std::pair{1, 3}, std::pair{3, 2}}) {
      const auto res = brute_force_success(w, k1, k2, Objective::Joint);
      CHECK(res.value == doctest::Approx(naive_joint(w, k1, k2)).epsilon(1e-12));
      CHECK(evaluate_code(w, res.code, Objective::Joint) == doctest::Approx(res.value));
      const auto sum = brute_force_success(w, k1, k2, Objective::Sum);
      CHECK(evaluate_code(w, sum.code, Objective::Sum) == doctest::Approx(sum.value));
    }
  }
}

TEST_CASE("brute force is monotone in the message counts") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const auto w = testing::random_channel(rng, 2, 2, 3);
    for (int k1 = 1; k1 <= 3; ++k1)
      for (int k2 = 1; k2 <= 3; ++k2) {
        const double v = brute_force_success(w, k1, k2, Objective::Joint).value;
        if (k1 > 1) CHECK(brute_force_success(w, k1 - 1, k2, Objective::Joint).value >= v - 1e-12);
        if (k2 > 1) CHECK(brute_force_success(w, k1, k2 - 1, Objective::Joint).value >= v - 1e-12);
      }
  }
}

TEST_CASE("brute force budget refuses large searches") {
  CHECK_THROWS_AS(brute_force_success(tensor_power(make_bac(), 3), 20, 20, Objective::Joint, 1000), BudgetExceeded);
}

TEST_CASE("point to point success") {
  CHECK(p2p_success(Eigen::MatrixXd::Identity(4, 4), 3) == doctest::Approx(1.0));
  CHECK(p2p_success(Eigen::MatrixXd::Ones(3, 1), 2) == doctest::Approx(0.5));
  Eigen::MatrixXd bsc(2, 2);
  bsc << 0.9, 0.1, 0.1, 0.9;
  CHECK(p2p_success(bsc, 2) == doctest::Approx((0.9 + 0.9) / 2));
}
