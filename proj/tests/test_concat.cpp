#include "test_main.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"
#include "nsmac/concat.hpp"
#include "support.hpp"

using namespace nsmac;

namespace {

double max_abs_diff(const Channel& a, const Channel& b) {
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("stats of trivial and perfect codes") {
  const auto one = stats_from_masses(1, 1, 1, 1, 1);
  CHECK(one.a == 1);
  CHECK(one.row_sum() == doctest::Approx(1.0));

  const auto perfect = stats_from_masses(4, 3, 1, 1, 1);
  CHECK(perfect.b == 0);
  CHECK(perfect.c == 0);
  CHECK(perfect.d == 0);
  const auto info = induced_info(perfect);
  CHECK(info.h_j == doctest::Approx(std::log2(12.0)));
  CHECK(info.i12 == doctest::Approx(std::log2(12.0)));
  const auto [c1, c2] = corner_rates(perfect, 2);
  CHECK(c1.r1 == doctest::Approx(1.0));
  CHECK(c1.r2 == doctest::Approx(std::log2(3.0) / 2));
  CHECK(c2.r1 == doctest::Approx(1.0));
  CHECK(c2.r2 == doctest::Approx(std::log2(3.0) / 2));
}

TEST_CASE("uniform induced channel carries nothing") {
  const int k1 = 3, k2 = 5;
  const auto s = stats_from_masses(k1, k2, 1.0 / (k1 * k2), 1.0 / k2, 1.0 / k1);
  CHECK(s.a == doctest::Approx(s.d));
  const auto info = induced_info(s);
  CHECK(info.i12 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(info.i1_given2 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(info.i2_given1 == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("negative entries are clamped or rejected") {
  const auto s = stats_from_masses(2, 2, 0.5, 0.5 - 5e-11, 0.75);
  CHECK(s.b == 0);
  CHECK(s.row_sum() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS(stats_from_masses(2, 2, 0.5, 0.4, 0.75));
  CHECK_THROWS(stats_from_masses(0, 2, 1, 1, 1));
}

TEST_CASE("induced informations agree with the general formula") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 40; ++trial) {
    const int k1 = 1 + int(rng() % 4), k2 = 1 + int(rng() % 4);
    // random a, b, c, d with the row constraint
    double a = u(rng), b = k1 > 1 ? u(rng) : 0, c = k2 > 1 ? u(rng) : 0, d = k1 > 1 && k2 > 1 ? u(rng) : 0;
    const double total = a + (k1 - 1) * b + (k2 - 1) * c + double(k1 - 1) * (k2 - 1) * d;
    a /= total, b /= total, c /= total, d /= total;
    const double K = double(k1) * k2;
    const double A = a, B1 = a + (k1 - 1) * b, B2 = a + (k2 - 1) * c;
    const auto s = stats_from_masses(k1, k2, A, B1, B2);
    CHECK(s.a == doctest::Approx(a));
    CHECK(s.d == doctest::Approx(d));
    CHECK(s.row_sum() == doctest::Approx(1.0));

    const auto info = induced_info(s);
    const auto mi = mutual_informations(structured_induced_channel(s), JointDist::uniform_product(k1, k2));
    CHECK(info.h_j == doctest::Approx(std::log2(K)));
    CHECK(info.i12 == doctest::Approx(mi.i12).epsilon(1e-9));
    CHECK(info.i1_given2 == doctest::Approx(mi.i1_given2).epsilon(1e-9));
    CHECK(info.i2_given1 == doctest::Approx(mi.i2_given1).epsilon(1e-9));
    CHECK(info.i1 == doctest::Approx(mi.i1).epsilon(1e-9));
    CHECK(info.i2 == doctest::Approx(mi.i2).epsilon(1e-9));

    // both corners lie on the sum-rate face
    CHECK(info.i1_given2 + info.i2 == doctest::Approx(info.i12));
    CHECK(info.i1 + info.i2_given1 == doctest::Approx(info.i12));
    CHECK(info.i1 <= info.i1_given2 + 1e-12);
    CHECK(info.i2 <= info.i2_given1 + 1e-12);
  }
}

TEST_CASE("adder channel at one use") {
  const auto w = make_bac();
  const MacOrbits orbits(2, 2, 3, 1);
  const auto res = solve_ns(w, orbits, 2, 2);
  REQUIRE(res.status == LpStatus::Optimal);
  const auto s = induced_stats(w, orbits, res.code);
  CHECK(s.A == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(s.a == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(s.row_sum() == doctest::Approx(1.0));
}

TEST_CASE("structured and explicit induced channels agree") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 1 + trial % 2;
    const auto w = testing::random_channel(rng, 2, 2, 2);
    const int k1 = 2 + int(rng() % 2), k2 = 2;
    const MacOrbits orbits(2, 2, 2, n);
    const auto res = solve_ns(w, orbits, k1, k2);
    REQUIRE(res.status == LpStatus::Optimal);
    const auto structured = structured_induced_channel(induced_stats(w, orbits, res.code));
    const auto explicit_channel = induced_channel_explicit(reconstruct_box(res.code), tensor_power(w, n));
    CHECK(max_abs_diff(structured, explicit_channel) <= 1e-9);
    const auto mi = mutual_informations(explicit_channel, JointDist::uniform_product(k1, k2));
    const auto info = induced_info(induced_stats(w, orbits, res.code));
    CHECK(info.i12 == doctest::Approx(mi.i12).epsilon(1e-8));
  }
}

TEST_CASE("adder channel at three uses reaches both message rates") {
  ConcatOptions options;
  const auto scan = concat_scan(make_bac(), 3, {{4, 5}}, options);
  REQUIRE(scan.cells.size() == 1);
  const auto& cell = scan.cells[0];
  REQUIRE(cell.ok());
  CHECK(cell.value == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(cell.corner1.r1 == doctest::Approx(2.0 / 3).epsilon(1e-7));
  CHECK(cell.corner1.r2 == doctest::Approx(std::log2(5.0) / 3).epsilon(1e-7));
  CHECK(cell.corner2.r1 == doctest::Approx(2.0 / 3).epsilon(1e-7));
  CHECK(scan.best_sum_rate == doctest::Approx((2 + std::log2(5.0)) / 3).epsilon(1e-7));
  CHECK(scan.frontier.points.size() == 1);
}

TEST_CASE("cell ranges") {
  CHECK(grid_cells(3, 2, 1, 4).empty());
  CHECK(grid_cells(1, 2, 3, 4) == std::vector<std::pair<int, int>>{{1, 3}, {1, 4}, {2, 3}, {2, 4}});
  CHECK(diagonal_cells(2, 4, 1) == std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}, {3, 3}, {3, 4}, {4, 3}, {4, 4}});
  const auto scan = concat_scan(make_bac(), 1, {});
  CHECK(scan.cells.empty());
  CHECK(scan.frontier.points.empty());
  CHECK(scan.best_sum_rate == 0);
}

TEST_CASE("scan over a small grid") {
  ConcatOptions options;
  options.threads = 2;
  const auto w = make_noisy_bac(0.001, 0.001);
  const auto scan = concat_scan(w, 2, grid_cells(1, 3, 1, 3), options);
  REQUIRE(scan.cells.size() == 9);
  double best = 0;
  for (std::size_t i = 0; i < scan.cells.size(); ++i) {
    const auto& c = scan.cells[i];
    CHECK(c.k1 == 1 + int(i) / 3);
    CHECK(c.k2 == 1 + int(i) % 3);
    REQUIRE(c.ok());
    CHECK(c.value <= 1 + 1e-9);
    // corners never exceed log2 k / n
    CHECK(c.corner1.r1 <= std::log2(c.k1) / 2 + 1e-9);
    CHECK(c.corner2.r2 <= std::log2(c.k2) / 2 + 1e-9);
    best = std::max({best, c.corner1.r1 + c.corner1.r2, c.corner2.r1 + c.corner2.r2});
  }
  CHECK(scan.best_sum_rate == best);
  for (std::size_t i = 1; i < scan.frontier.points.size(); ++i) {
    CHECK(scan.frontier.points[i].r1 > scan.frontier.points[i - 1].r1);
    CHECK(scan.frontier.points[i].r2 < scan.frontier.points[i - 1].r2);
  }
  std::ostringstream out;
  write_concat_json(scan, out);
  const auto j = nlohmann::json::parse(out.str());
  CHECK(j["cells"].size() == 9);
  CHECK(j["best_sum_rate"].get<double>() == best);
}
