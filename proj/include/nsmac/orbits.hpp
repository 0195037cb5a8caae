#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsmac/channel.hpp"

namespace nsmac {

/// All types (count vectors summing to n) over an alphabet of a given size, in
/// descending lexicographic order, with exact orbit sizes n! / prod t_s!.
class OrbitTable {
 public:
  OrbitTable(int alphabet_size, int n, std::size_t max_orbits = 50'000'000);

  int alphabet_size() const { return a_; }
  int n() const { return n_; }
  std::size_t size() const { return sizes_.size(); }

  /// Count vector of orbit i (alphabet_size entries).
  const std::uint8_t* type(std::size_t i) const { return &types_[i * a_]; }
  std::vector<int> type_vector(std::size_t i) const;
  const BigInt& orbit_size(std::size_t i) const { return sizes_[i]; }

  /// Position of a count vector in the enumeration.
  std::size_t index_of(const int* counts) const;
  std::size_t index_of(const std::vector<int>& counts) const { return index_of(counts.data()); }

  /// Index of the projected orbit in `target` for every orbit, where symbol s maps to symbol_map[s].
  std::vector<std::uint32_t> projection(const OrbitTable& target, const std::vector<int>& symbol_map) const;

  std::string dump() const;

 private:
  std::uint64_t compositions(int total, int parts) const;

  int a_, n_;
  std::vector<std::uint8_t> types_;
  std::vector<BigInt> sizes_;
  std::vector<std::vector<std::uint64_t>> binom_;
};

/// Number of compositions of n into parts nonnegative parts, C(n + parts - 1, parts - 1).
BigInt count_orbits(int alphabet_size, int n);

BigInt multinomial(const std::vector<int>& counts);

/// Marginal counts of t under a symbol map onto target_size symbols.
std::vector<int> project_type(const std::vector<int>& t, const std::vector<int>& symbol_map, int target_size);

/// Symbol maps for the triple alphabet (x1, x2, y) with index (x1 * nx2 + x2) * ny + y.
struct TripleMaps {
  std::vector<int> to_pair, to_y, to_x1y, to_x2y;
  std::vector<int> pair_to_x1, pair_to_x2;
};
TripleMaps triple_maps(int nx1, int nx2, int ny);

/// Orbit tables and projections needed by the symmetrized programs of a channel at n copies.
struct MacOrbits {
  MacOrbits(int nx1, int nx2, int ny, int n);

  int nx1, nx2, ny, n;
  OrbitTable triples, pairs, y, x1y, x2y, x1, x2;
  std::vector<std::uint32_t> triple_to_pair, triple_to_y, triple_to_x1y, triple_to_x2y;
  std::vector<std::uint32_t> pair_to_x1, pair_to_x2, x1y_to_x1, x2y_to_x2;
};

/// prod_s W(s)^{t_s} over the triple alphabet.
template <class Scalar>
Scalar channel_value_on_orbit(const BasicChannel<Scalar>& w, const std::uint8_t* t) {
  Scalar value = 1;
  int s = 0;
  for (int x1 = 0; x1 < w.nx1(); ++x1)
    for (int x2 = 0; x2 < w.nx2(); ++x2)
      for (int y = 0; y < w.ny(); ++y, ++s)
        for (int c = 0; c < t[s]; ++c) value *= w(x1, x2, y);
  return value;
}

template <class Scalar>
Scalar channel_value_on_orbit(const BasicChannel<Scalar>& w, const std::vector<int>& t) {
  std::vector<std::uint8_t> packed(t.begin(), t.end());
  return channel_value_on_orbit(w, packed.data());
}

}  // namespace nsmac
