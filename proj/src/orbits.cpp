#include "nsmac/orbits.hpp"

#include <sstream>
#include <stdexcept>

namespace nsmac {

namespace {

BigInt factorial(int n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

}  // namespace

BigInt count_orbits(int alphabet_size, int n) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n + alphabet_size - 1),
               static_cast<unsigned long>(alphabet_size - 1));
  return r;
}

BigInt multinomial(const std::vector<int>& counts) {
  int n = 0;
  for (int c : counts) n += c;
  BigInt r = factorial(n);
  for (int c : counts) r /= factorial(c);
  return r;
}

std::vector<int> project_type(const std::vector<int>& t, const std::vector<int>& symbol_map, int target_size) {
  std::vector<int> out(target_size, 0);
  for (std::size_t s = 0; s < t.size(); ++s) out[symbol_map[s]] += t[s];
  return out;
}

OrbitTable::OrbitTable(int alphabet_size, int n, std::size_t max_orbits) : a_(alphabet_size), n_(n) {
  if (alphabet_size < 1) throw std::invalid_argument("alphabet must be nonempty");
  if (n < 1 || n > 255) throw std::invalid_argument("number of copies must be in [1, 255]");
  const BigInt count = count_orbits(alphabet_size, n);
  if (count > BigInt(std::to_string(max_orbits))) throw std::length_error("orbit table exceeds budget");

  binom_.assign(n + 1, std::vector<std::uint64_t>(a_ + 1, 0));
  for (int total = 0; total <= n; ++total)
    for (int parts = 1; parts <= a_; ++parts)
      binom_[total][parts] = count_orbits(parts, total).get_ui();

  const std::size_t m = count.get_ui();
  types_.reserve(m * a_);
  sizes_.reserve(m);
  std::vector<int> t(a_, 0);
  const BigInt nfact = factorial(n);
  std::vector<BigInt> fact(n + 1);
  for (int i = 0; i <= n; ++i) fact[i] = factorial(i);

  // Depth-first fill, largest count first at every position.
  auto emit = [&]() {
    BigInt size = nfact;
    for (int c : t) {
      types_.push_back(static_cast<std::uint8_t>(c));
      size /= fact[c];
    }
    sizes_.push_back(size);
  };
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == a_ - 1) {
      t[pos] = remaining;
      emit();
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      t[pos] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  rec(rec, 0, n);
}

std::uint64_t OrbitTable::compositions(int total, int parts) const { return binom_[total][parts]; }

std::vector<int> OrbitTable::type_vector(std::size_t i) const {
  const std::uint8_t* t = type(i);
  return std::vector<int>(t, t + a_);
}

std::size_t OrbitTable::index_of(const int* counts) const {
  std::size_t rank = 0;
  int remaining = n_;
  for (int i = 0; i + 1 < a_; ++i) {
    const int parts_after = a_ - 1 - i;
    for (int v = remaining; v > counts[i]; --v) rank += compositions(remaining - v, parts_after);
    remaining -= counts[i];
  }
  return rank;
}

std::vector<std::uint32_t> OrbitTable::projection(const OrbitTable& target, const std::vector<int>& symbol_map) const {
  if (target.n() != n_ || int(symbol_map.size()) != a_) throw std::invalid_argument("incompatible projection");
  std::vector<std::uint32_t> out(size());
  std::vector<int> proj(target.alphabet_size());
  for (std::size_t i = 0; i < size(); ++i) {
    std::fill(proj.begin(), proj.end(), 0);
    const std::uint8_t* t = type(i);
    for (int s = 0; s < a_; ++s) proj[symbol_map[s]] += t[s];
    out[i] = static_cast<std::uint32_t>(target.index_of(proj.data()));
  }
  return out;
}

std::string OrbitTable::dump() const {
  std::ostringstream out;
  out << "# alphabet " << a_ << " n " << n_ << " orbits " << size() << "\n";
  for (std::size_t i = 0; i < size(); ++i) {
    out << i << " [";
    for (int s = 0; s < a_; ++s) out << (s ? " " : "") << int(type(i)[s]);
    out << "] " << sizes_[i].get_str() << "\n";
  }
  return out.str();
}

TripleMaps triple_maps(int nx1, int nx2, int ny) {
  TripleMaps m;
  for (int x1 = 0; x1 < nx1; ++x1)
    for (int x2 = 0; x2 < nx2; ++x2) {
      m.pair_to_x1.push_back(x1);
      m.pair_to_x2.push_back(x2);
      for (int y = 0; y < ny; ++y) {
        m.to_pair.push_back(x1 * nx2 + x2);
        m.to_y.push_back(y);
        m.to_x1y.push_back(x1 * ny + y);
        m.to_x2y.push_back(x2 * ny + y);
      }
    }
  return m;
}

MacOrbits::MacOrbits(int nx1_, int nx2_, int ny_, int n_)
    : nx1(nx1_), nx2(nx2_), ny(ny_), n(n_),
      triples(nx1_ * nx2_ * ny_, n_), pairs(nx1_ * nx2_, n_), y(ny_, n_),
      x1y(nx1_ * ny_, n_), x2y(nx2_ * ny_, n_), x1(nx1_, n_), x2(nx2_, n_) {
  const TripleMaps m = triple_maps(nx1, nx2, ny);
  triple_to_pair = triples.projection(pairs, m.to_pair);
  triple_to_y = triples.projection(y, m.to_y);
  triple_to_x1y = triples.projection(x1y, m.to_x1y);
  triple_to_x2y = triples.projection(x2y, m.to_x2y);
  pair_to_x1 = pairs.projection(x1, m.pair_to_x1);
  pair_to_x2 = pairs.projection(x2, m.pair_to_x2);
  std::vector<int> x1y_x1, x2y_x2;
  for (int a = 0; a < nx1; ++a)
    for (int b = 0; b < ny; ++b) x1y_x1.push_back(a);
  for (int a = 0; a < nx2; ++a)
    for (int b = 0; b < ny; ++b) x2y_x2.push_back(a);
  x1y_to_x1 = x1y.projection(x1, x1y_x1);
  x2y_to_x2 = x2y.projection(x2, x2y_x2);
}

}  // namespace nsmac
