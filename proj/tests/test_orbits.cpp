#include "test_main.hpp"

#include <map>

#include "nsmac/orbits.hpp"
#include "support.hpp"

using namespace nsmac;

namespace {

BigInt binomial(int n, int k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

}  // namespace

TEST_CASE("binary types of length three") {
  OrbitTable t(2, 3);
  REQUIRE(t.size() == 4);
  const std::vector<std::vector<int>> types{{3, 0}, {2, 1}, {1, 2}, {0, 3}};
  const std::vector<int> sizes{1, 3, 3, 1};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(t.type_vector(i) == types[i]);
    CHECK(t.orbit_size(i) == sizes[i]);
    CHECK(t.index_of(types[i]) == i);
  }
}

TEST_CASE("orbit counts follow stars and bars") {
  CHECK(OrbitTable(12, 3).size() == binomial(14, 11));
  CHECK(OrbitTable(12, 7).size() == binomial(18, 11));
  for (int a = 1; a <= 6; ++a)
    for (int n = 1; n <= 5; ++n) {
      OrbitTable t(a, n);
      CHECK(t.size() == binomial(n + a - 1, a - 1));
      CHECK(count_orbits(a, n) == binomial(n + a - 1, a - 1));
      BigInt total = 0;
      for (std::size_t i = 0; i < t.size(); ++i) total += t.orbit_size(i);
      BigInt power;
      mpz_ui_pow_ui(power.get_mpz_t(), a, n);
      CHECK(total == power);
    }
}

TEST_CASE("type projection") {
  const auto maps = triple_maps(2, 2, 3);
  std::vector<int> t(12, 0);
  t[0] = 2;                 // (0,0,0)
  t[(1 * 2 + 1) * 3 + 2] = 1;  // (1,1,2)
  const auto pair = project_type(t, maps.to_pair, 4);
  CHECK(pair == std::vector<int>{2, 0, 0, 1});
  const auto y = project_type(t, maps.to_y, 3);
  CHECK(y == std::vector<int>{2, 0, 1});
  OrbitTable one(12, 1);
  for (std::size_t i = 0; i < one.size(); ++i) {
    const auto ti = one.type_vector(i);
    const int s = int(std::find(ti.begin(), ti.end(), 1) - ti.begin());
    const auto py = project_type(ti, maps.to_y, 3);
    CHECK(py[s % 3] == 1);
  }
}

TEST_CASE("channel value on orbits") {
  const auto bac = make_bac();
  std::vector<int> t(12, 0);
  t[0] = 2;
  t[11] = 1;
  CHECK(channel_value_on_orbit(bac, t) == 1.0);
  std::vector<int> bad(12, 0);
  bad[1] = 1;  // (0,0,1)
  bad[0] = 2;
  CHECK(channel_value_on_orbit(bac, bad) == 0.0);
  std::vector<int> single(12, 0);
  single[0] = 1;
  CHECK(channel_value_on_orbit(make_noisy_bac(1e-3, 1e-3), single) == doctest::Approx(0.998001));
}

TEST_CASE("grouping explicit tuples by type reproduces the orbit tables") {
  std::mt19937 rng(3);
  const auto w = testing::random_channel(rng, 2, 2, 3);
  for (int n = 1; n <= 3; ++n) {
    const MacOrbits o(2, 2, 3, n);
    const auto wn = tensor_power(w, n);
    std::map<std::vector<int>, long> seen;
    const int base = 12;
    long total = 1;
    for (int c = 0; c < n; ++c) total *= base;
    for (long code = 0; code < total; ++code) {
      std::vector<int> t(12, 0), syms(n);
      long v = code;
      int X1 = 0, X2 = 0, Y = 0;
      for (int c = n - 1; c >= 0; --c) syms[c] = int(v % base), v /= base;
      for (int c = 0; c < n; ++c) {
        ++t[syms[c]];
        X1 = X1 * 2 + syms[c] / 6;
        X2 = X2 * 2 + (syms[c] / 3) % 2;
        Y = Y * 3 + syms[c] % 3;
      }
      ++seen[t];
      CHECK(wn(X1, X2, Y) == doctest::Approx(channel_value_on_orbit(w, t)).epsilon(1e-12));
    }
    CHECK(seen.size() == o.triples.size());
    for (const auto& [t, count] : seen) CHECK(o.triples.orbit_size(o.triples.index_of(t)) == count);
  }
}

TEST_CASE("projection fibers have integer size ratios") {
  for (int n = 1; n <= 3; ++n) {
    const MacOrbits o(2, 2, 3, n);
    std::vector<BigInt> mass(o.pairs.size(), 0);
    for (std::size_t t = 0; t < o.triples.size(); ++t) {
      const auto u = o.triple_to_pair[t];
      CHECK(o.triples.orbit_size(t) % o.pairs.orbit_size(u) == 0);
      CHECK(project_type(o.triples.type_vector(t), triple_maps(2, 2, 3).to_pair, 4) == o.pairs.type_vector(u));
      mass[u] += o.triples.orbit_size(t);
    }
    BigInt per_pair;
    mpz_ui_pow_ui(per_pair.get_mpz_t(), 3, n);
    for (std::size_t u = 0; u < o.pairs.size(); ++u) CHECK(mass[u] == o.pairs.orbit_size(u) * per_pair);
  }
}

TEST_CASE("orbit table dump lists every type") {
  OrbitTable t(2, 2);
  const auto text = t.dump();
  CHECK(text.find("2 0") != std::string::npos);
  CHECK(text.find("0 2") != std::string::npos);
}
