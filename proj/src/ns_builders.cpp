#include "nsmac/ns_programs.hpp"

namespace nsmac {

namespace {

template <class Scalar>
Scalar ratio(long num, long den) {
  return ScalarTraits<Scalar>::from_ratio(num, den);
}

template <class Scalar>
Scalar big(const BigInt& z) {
  return ScalarTraits<Scalar>::from_big(z);
}

// Row builder accumulating coefficients per variable.
template <class Scalar>
struct RowBuilder {
  LpRow<Scalar> row;
  RowBuilder& add(int j, const Scalar& v) {
    row.index.push_back(j);
    row.value.push_back(v);
    return *this;
  }
  int into(LinearProgram<Scalar>& lp, Relation rel, Scalar rhs) {
    row.relation = rel;
    row.rhs = std::move(rhs);
    return lp.add_row(std::move(row));
  }
};

template <class Scalar>
void set_ns_objective(LinearProgram<Scalar>& lp, const NsLayout& L, int w, const Scalar& value, int k1, int k2,
                      Objective objective) {
  if (objective == Objective::Joint) {
    lp.set_objective(L.r(w), Scalar(value * ratio<Scalar>(1, long(k1) * k2)));
  } else {
    const Scalar c = value * ratio<Scalar>(1, 2L * k1 * k2);
    lp.set_objective(L.r1(w), c);
    lp.set_objective(L.r2(w), c);
  }
}

}  // namespace

template <class Scalar>
LinearProgram<Scalar> build_ns_lp_element(const BasicChannel<Scalar>& w, int k1, int k2, Objective objective) {
  if (k1 < 1 || k2 < 1) throw std::invalid_argument("message counts must be positive");
  const int nx1 = w.nx1(), nx2 = w.nx2(), ny = w.ny();
  NsLayout L{nx1 * nx2 * ny, nx1 * nx2};
  auto t = [&](int x1, int x2, int y) { return (x1 * nx2 + x2) * ny + y; };
  LinearProgram<Scalar> lp;
  lp.add_variables(L.num_vars());
  for (int x1 = 0; x1 < nx1; ++x1)
    for (int x2 = 0; x2 < nx2; ++x2)
      for (int y = 0; y < ny; ++y) set_ns_objective(lp, L, t(x1, x2, y), w(x1, x2, y), k1, k2, objective);
  const Scalar K1(k1), K2(k2);
  for (int y = 0; y < ny; ++y) {
    RowBuilder<Scalar> b;
    for (int x1 = 0; x1 < nx1; ++x1)
      for (int x2 = 0; x2 < nx2; ++x2) b.add(L.r(t(x1, x2, y)), Scalar(1));
    b.into(lp, Relation::Equal, Scalar(1));
  }
  for (int x2 = 0; x2 < nx2; ++x2)
    for (int y = 0; y < ny; ++y) {
      RowBuilder<Scalar> b;
      for (int x1 = 0; x1 < nx1; ++x1) b.add(L.r1(t(x1, x2, y)), Scalar(1)).add(L.r(t(x1, x2, y)), Scalar(-K1));
      b.into(lp, Relation::Equal, Scalar(0));
    }
  for (int x1 = 0; x1 < nx1; ++x1)
    for (int y = 0; y < ny; ++y) {
      RowBuilder<Scalar> b;
      for (int x2 = 0; x2 < nx2; ++x2) b.add(L.r2(t(x1, x2, y)), Scalar(1)).add(L.r(t(x1, x2, y)), Scalar(-K2));
      b.into(lp, Relation::Equal, Scalar(0));
    }
  for (int x2 = 0; x2 < nx2; ++x2)
    for (int y = 0; y < ny; ++y) {
      RowBuilder<Scalar> b;
      for (int x1 = 0; x1 < nx1; ++x1) b.add(L.p(x1 * nx2 + x2), Scalar(1)).add(L.r2(t(x1, x2, y)), Scalar(-K1));
      b.into(lp, Relation::Equal, Scalar(0));
    }
  for (int x1 = 0; x1 < nx1; ++x1)
    for (int y = 0; y < ny; ++y) {
      RowBuilder<Scalar> b;
      for (int x2 = 0; x2 < nx2; ++x2) b.add(L.p(x1 * nx2 + x2), Scalar(1)).add(L.r1(t(x1, x2, y)), Scalar(-K2));
      b.into(lp, Relation::Equal, Scalar(0));
    }
  for (int x1 = 0; x1 < nx1; ++x1)
    for (int x2 = 0; x2 < nx2; ++x2)
      for (int y = 0; y < ny; ++y) {
        const int s = t(x1, x2, y), u = x1 * nx2 + x2;
        RowBuilder<Scalar>().add(L.r(s), Scalar(1)).add(L.r1(s), Scalar(-1)).into(lp, Relation::LessEqual, Scalar(0));
        RowBuilder<Scalar>().add(L.r(s), Scalar(1)).add(L.r2(s), Scalar(-1)).into(lp, Relation::LessEqual, Scalar(0));
        RowBuilder<Scalar>().add(L.r1(s), Scalar(1)).add(L.p(u), Scalar(-1)).into(lp, Relation::LessEqual, Scalar(0));
        RowBuilder<Scalar>().add(L.r2(s), Scalar(1)).add(L.p(u), Scalar(-1)).into(lp, Relation::LessEqual, Scalar(0));
        RowBuilder<Scalar>()
            .add(L.p(u), Scalar(1))
            .add(L.r1(s), Scalar(-1))
            .add(L.r2(s), Scalar(-1))
            .add(L.r(s), Scalar(1))
            .into(lp, Relation::GreaterEqual, Scalar(0));
      }
  return lp;
}

template <class Scalar>
LinearProgram<Scalar> build_ns_lp_orbit(const BasicChannel<Scalar>& w, const MacOrbits& o, int k1, int k2,
                                        Objective objective) {
  if (k1 < 1 || k2 < 1) throw std::invalid_argument("message counts must be positive");
  if (o.nx1 != w.nx1() || o.nx2 != w.nx2() || o.ny != w.ny())
    throw std::invalid_argument("orbit tables do not match the channel alphabets");
  const int T = int(o.triples.size()), P = int(o.pairs.size());
  NsLayout L{T, P};
  LinearProgram<Scalar> lp;
  lp.add_variables(L.num_vars());
  for (int t = 0; t < T; ++t) {
    const Scalar value = channel_value_on_orbit(w, o.triples.type(t));
    if (value != 0) set_ns_objective(lp, L, t, value, k1, k2, objective);
  }

  std::vector<std::vector<int>> by_y(o.y.size()), by_x1y(o.x1y.size()), by_x2y(o.x2y.size());
  for (int t = 0; t < T; ++t) {
    by_y[o.triple_to_y[t]].push_back(t);
    by_x1y[o.triple_to_x1y[t]].push_back(t);
    by_x2y[o.triple_to_x2y[t]].push_back(t);
  }
  std::vector<std::vector<int>> pairs_by_x1(o.x1.size()), pairs_by_x2(o.x2.size());
  for (int u = 0; u < P; ++u) {
    pairs_by_x1[o.pair_to_x1[u]].push_back(u);
    pairs_by_x2[o.pair_to_x2[u]].push_back(u);
  }
  const Scalar K1(k1), K2(k2);

  for (std::size_t v = 0; v < o.y.size(); ++v) {
    RowBuilder<Scalar> b;
    for (int t : by_y[v]) b.add(L.r(t), Scalar(1));
    b.into(lp, Relation::Equal, big<Scalar>(o.y.orbit_size(v)));
  }
  for (std::size_t v = 0; v < o.x2y.size(); ++v) {
    RowBuilder<Scalar> b;
    for (int t : by_x2y[v]) b.add(L.r1(t), Scalar(1)).add(L.r(t), Scalar(-K1));
    b.into(lp, Relation::Equal, Scalar(0));
  }
  for (std::size_t v = 0; v < o.x1y.size(); ++v) {
    RowBuilder<Scalar> b;
    for (int t : by_x1y[v]) b.add(L.r2(t), Scalar(1)).add(L.r(t), Scalar(-K2));
    b.into(lp, Relation::Equal, Scalar(0));
  }
  // Written as (|v|/|v_X|) sum p_u = k sum r_w so that all coefficients are integers.
  for (std::size_t v = 0; v < o.x2y.size(); ++v) {
    const std::uint32_t vx = o.x2y_to_x2[v];
    const Scalar fiber = big<Scalar>(BigInt(o.x2y.orbit_size(v) / o.x2.orbit_size(vx)));
    RowBuilder<Scalar> b;
    for (int u : pairs_by_x2[vx]) b.add(L.p(u), fiber);
    for (int t : by_x2y[v]) b.add(L.r2(t), Scalar(-K1));
    b.into(lp, Relation::Equal, Scalar(0));
  }
  for (std::size_t v = 0; v < o.x1y.size(); ++v) {
    const std::uint32_t vx = o.x1y_to_x1[v];
    const Scalar fiber = big<Scalar>(BigInt(o.x1y.orbit_size(v) / o.x1.orbit_size(vx)));
    RowBuilder<Scalar> b;
    for (int u : pairs_by_x1[vx]) b.add(L.p(u), fiber);
    for (int t : by_x1y[v]) b.add(L.r1(t), Scalar(-K2));
    b.into(lp, Relation::Equal, Scalar(0));
  }
  for (int t = 0; t < T; ++t) {
    const int u = int(o.triple_to_pair[t]);
    const Scalar c = big<Scalar>(BigInt(o.triples.orbit_size(t) / o.pairs.orbit_size(u)));
    RowBuilder<Scalar>().add(L.r(t), Scalar(1)).add(L.r1(t), Scalar(-1)).into(lp, Relation::LessEqual, Scalar(0));
    RowBuilder<Scalar>().add(L.r(t), Scalar(1)).add(L.r2(t), Scalar(-1)).into(lp, Relation::LessEqual, Scalar(0));
    RowBuilder<Scalar>().add(L.r1(t), Scalar(1)).add(L.p(u), Scalar(-c)).into(lp, Relation::LessEqual, Scalar(0));
    RowBuilder<Scalar>().add(L.r2(t), Scalar(1)).add(L.p(u), Scalar(-c)).into(lp, Relation::LessEqual, Scalar(0));
    RowBuilder<Scalar>()
        .add(L.p(u), c)
        .add(L.r1(t), Scalar(-1))
        .add(L.r2(t), Scalar(-1))
        .add(L.r(t), Scalar(1))
        .into(lp, Relation::GreaterEqual, Scalar(0));
  }
  return lp;
}

template <class Scalar>
LinearProgram<Scalar> build_ns_lp_orbit_compact(const BasicChannel<Scalar>& w, const MacOrbits& o, int k1, int k2,
                                                Objective objective) {
  if (k1 < 1 || k2 < 1) throw std::invalid_argument("message counts must be positive");
  if (o.nx1 != w.nx1() || o.nx2 != w.nx2() || o.ny != w.ny())
    throw std::invalid_argument("orbit tables do not match the channel alphabets");
  const int T = int(o.triples.size()), P = int(o.pairs.size());
  // Same layout as NsLayout with the r1 block holding b1 = r1 - r and the r2 block b2 = r2 - r.
  NsLayout L{T, P};
  LinearProgram<Scalar> lp;
  lp.add_variables(L.num_vars());
  for (int t = 0; t < T; ++t) {
    const Scalar value = channel_value_on_orbit(w, o.triples.type(t));
    if (value == 0) continue;
    if (objective == Objective::Joint) {
      lp.set_objective(L.r(t), Scalar(value * ratio<Scalar>(1, long(k1) * k2)));
    } else {
      const Scalar c = value * ratio<Scalar>(1, 2L * k1 * k2);
      lp.set_objective(L.r(t), Scalar(2 * c));
      lp.set_objective(L.r1(t), c);
      lp.set_objective(L.r2(t), c);
    }
  }
  std::vector<std::vector<int>> by_y(o.y.size()), by_x1y(o.x1y.size()), by_x2y(o.x2y.size());
  for (int t = 0; t < T; ++t) {
    by_y[o.triple_to_y[t]].push_back(t);
    by_x1y[o.triple_to_x1y[t]].push_back(t);
    by_x2y[o.triple_to_x2y[t]].push_back(t);
  }
  std::vector<std::vector<int>> pairs_by_x1(o.x1.size()), pairs_by_x2(o.x2.size());
  for (int u = 0; u < P; ++u) {
    pairs_by_x1[o.pair_to_x1[u]].push_back(u);
    pairs_by_x2[o.pair_to_x2[u]].push_back(u);
  }
  const Scalar K1(k1), K2(k2);
  for (std::size_t v = 0; v < o.y.size(); ++v) {
    RowBuilder<Scalar> b;
    for (int t : by_y[v]) b.add(L.r(t), Scalar(1));
    b.into(lp, Relation::Equal, big<Scalar>(o.y.orbit_size(v)));
  }
  for (std::size_t v = 0; v < o.x2y.size(); ++v) {
    RowBuilder<Scalar> b;
    for (int t : by_x2y[v]) {
      b.add(L.r1(t), Scalar(1));
      if (k1 != 1) b.add(L.r(t), Scalar(1 - K1));
    }
    b.into(lp, Relation::Equal, Scalar(0));
  }
  for (std::size_t v = 0; v < o.x1y.size(); ++v) {
    RowBuilder<Scalar> b;
    for (int t : by_x1y[v]) {
      b.add(L.r2(t), Scalar(1));
      if (k2 != 1) b.add(L.r(t), Scalar(1 - K2));
    }
    b.into(lp, Relation::Equal, Scalar(0));
  }
  for (std::size_t v = 0; v < o.x2y.size(); ++v) {
    const std::uint32_t vx = o.x2y_to_x2[v];
    const Scalar fiber = big<Scalar>(BigInt(o.x2y.orbit_size(v) / o.x2.orbit_size(vx)));
    RowBuilder<Scalar> b;
    for (int u : pairs_by_x2[vx]) b.add(L.p(u), fiber);
    for (int t : by_x2y[v]) b.add(L.r2(t), Scalar(-K1)).add(L.r(t), Scalar(-K1));
    b.into(lp, Relation::Equal, Scalar(0));
  }
  for (std::size_t v = 0; v < o.x1y.size(); ++v) {
    const std::uint32_t vx = o.x1y_to_x1[v];
    const Scalar fiber = big<Scalar>(BigInt(o.x1y.orbit_size(v) / o.x1.orbit_size(vx)));
    RowBuilder<Scalar> b;
    for (int u : pairs_by_x1[vx]) b.add(L.p(u), fiber);
    for (int t : by_x1y[v]) b.add(L.r1(t), Scalar(-K2)).add(L.r(t), Scalar(-K2));
    b.into(lp, Relation::Equal, Scalar(0));
  }
  for (int t = 0; t < T; ++t) {
    const int u = int(o.triple_to_pair[t]);
    const Scalar c = big<Scalar>(BigInt(o.triples.orbit_size(t) / o.pairs.orbit_size(u)));
    RowBuilder<Scalar>()
        .add(L.p(u), c)
        .add(L.r(t), Scalar(-1))
        .add(L.r1(t), Scalar(-1))
        .add(L.r2(t), Scalar(-1))
        .into(lp, Relation::GreaterEqual, Scalar(0));
  }
  return lp;
}

template <class Scalar>
LinearProgram<Scalar> build_relaxed_lp_element(const BasicChannel<Scalar>& w, int k1, int k2) {
  if (k1 < 1 || k2 < 1) throw std::invalid_argument("message counts must be positive");
  const int nx1 = w.nx1(), nx2 = w.nx2(), ny = w.ny();
  RelaxedLayout L{nx1 * nx2 * ny, nx1 * nx2};
  auto t = [&](int x1, int x2, int y) { return (x1 * nx2 + x2) * ny + y; };
  LinearProgram<Scalar> lp;
  lp.add_variables(L.num_vars());
  const Scalar scale = ratio<Scalar>(1, long(k1) * k2);
  for (int x1 = 0; x1 < nx1; ++x1)
    for (int x2 = 0; x2 < nx2; ++x2)
      for (int y = 0; y < ny; ++y) lp.set_objective(L.r(t(x1, x2, y)), Scalar(w(x1, x2, y) * scale));
  for (int y = 0; y < ny; ++y) {
    RowBuilder<Scalar> b;
    for (int x1 = 0; x1 < nx1; ++x1)
      for (int x2 = 0; x2 < nx2; ++x2) b.add(L.r(t(x1, x2, y)), Scalar(1));
    b.into(lp, Relation::LessEqual, Scalar(1));
  }
  {
    RowBuilder<Scalar> b;
    for (int u = 0; u < L.pairs; ++u) b.add(L.p(u), Scalar(1));
    b.into(lp, Relation::Equal, Scalar(long(k1) * k2));
  }
  for (int x2 = 0; x2 < nx2; ++x2)
    for (int y = 0; y < ny; ++y) {
      RowBuilder<Scalar> b;
      for (int x1 = 0; x1 < nx1; ++x1) b.add(L.p(x1 * nx2 + x2), Scalar(1)).add(L.r(t(x1, x2, y)), Scalar(-k1));
      b.into(lp, Relation::GreaterEqual, Scalar(0));
    }
  for (int x1 = 0; x1 < nx1; ++x1)
    for (int y = 0; y < ny; ++y) {
      RowBuilder<Scalar> b;
      for (int x2 = 0; x2 < nx2; ++x2) b.add(L.p(x1 * nx2 + x2), Scalar(1)).add(L.r(t(x1, x2, y)), Scalar(-k2));
      b.into(lp, Relation::GreaterEqual, Scalar(0));
    }
  for (int x1 = 0; x1 < nx1; ++x1)
    for (int x2 = 0; x2 < nx2; ++x2)
      for (int y = 0; y < ny; ++y)
        RowBuilder<Scalar>()
            .add(L.r(t(x1, x2, y)), Scalar(1))
            .add(L.p(x1 * nx2 + x2), Scalar(-1))
            .into(lp, Relation::LessEqual, Scalar(0));
  return lp;
}

template <class Scalar>
LinearProgram<Scalar> build_relaxed_lp_orbit(const BasicChannel<Scalar>& w, const MacOrbits& o, int k1, int k2) {
  if (k1 < 1 || k2 < 1) throw std::invalid_argument("message counts must be positive");
  if (o.nx1 != w.nx1() || o.nx2 != w.nx2() || o.ny != w.ny())
    throw std::invalid_argument("orbit tables do not match the channel alphabets");
  const int T = int(o.triples.size()), P = int(o.pairs.size());
  RelaxedLayout L{T, P};
  LinearProgram<Scalar> lp;
  lp.add_variables(L.num_vars());
  const Scalar scale = ratio<Scalar>(1, long(k1) * k2);
  for (int t = 0; t < T; ++t) {
    const Scalar value = channel_value_on_orbit(w, o.triples.type(t));
    if (value != 0) lp.set_objective(L.r(t), Scalar(value * scale));
  }
  std::vector<std::vector<int>> by_y(o.y.size()), by_x1y(o.x1y.size()), by_x2y(o.x2y.size());
  for (int t = 0; t < T; ++t) {
    by_y[o.triple_to_y[t]].push_back(t);
    by_x1y[o.triple_to_x1y[t]].push_back(t);
    by_x2y[o.triple_to_x2y[t]].push_back(t);
  }
  std::vector<std::vector<int>> pairs_by_x1(o.x1.size()), pairs_by_x2(o.x2.size());
  for (int u = 0; u < P; ++u) {
    pairs_by_x1[o.pair_to_x1[u]].push_back(u);
    pairs_by_x2[o.pair_to_x2[u]].push_back(u);
  }
  for (std::size_t v = 0; v < o.y.size(); ++v) {
    RowBuilder<Scalar> b;
    for (int t : by_y[v]) b.add(L.r(t), Scalar(1));
    b.into(lp, Relation::LessEqual, big<Scalar>(o.y.orbit_size(v)));
  }
  {
    RowBuilder<Scalar> b;
    for (int u = 0; u < P; ++u) b.add(L.p(u), Scalar(1));
    b.into(lp, Relation::Equal, Scalar(long(k1) * k2));
  }
  for (std::size_t v = 0; v < o.x2y.size(); ++v) {
    const std::uint32_t vx = o.x2y_to_x2[v];
    const Scalar fiber = big<Scalar>(BigInt(o.x2y.orbit_size(v) / o.x2.orbit_size(vx)));
    RowBuilder<Scalar> b;
    for (int u : pairs_by_x2[vx]) b.add(L.p(u), fiber);
    for (int t : by_x2y[v]) b.add(L.r(t), Scalar(-k1));
    b.into(lp, Relation::GreaterEqual, Scalar(0));
  }
  for (std::size_t v = 0; v < o.x1y.size(); ++v) {
    const std::uint32_t vx = o.x1y_to_x1[v];
    const Scalar fiber = big<Scalar>(BigInt(o.x1y.orbit_size(v) / o.x1.orbit_size(vx)));
    RowBuilder<Scalar> b;
    for (int u : pairs_by_x1[vx]) b.add(L.p(u), fiber);
    for (int t : by_x1y[v]) b.add(L.r(t), Scalar(-k2));
    b.into(lp, Relation::GreaterEqual, Scalar(0));
  }
  for (int t = 0; t < T; ++t) {
    const int u = int(o.triple_to_pair[t]);
    const Scalar c = big<Scalar>(BigInt(o.triples.orbit_size(t) / o.pairs.orbit_size(u)));
    RowBuilder<Scalar>().add(L.r(t), Scalar(1)).add(L.p(u), Scalar(-c)).into(lp, Relation::LessEqual, Scalar(0));
  }
  return lp;
}

#define NSMAC_INSTANTIATE(S)                                                                                      \
  template LinearProgram<S> build_ns_lp_element(const BasicChannel<S>&, int, int, Objective);                     \
  template LinearProgram<S> build_ns_lp_orbit(const BasicChannel<S>&, const MacOrbits&, int, int, Objective);     \
  template LinearProgram<S> build_ns_lp_orbit_compact(const BasicChannel<S>&, const MacOrbits&, int, int,        \
                                                      Objective);                                                 \
  template LinearProgram<S> build_relaxed_lp_element(const BasicChannel<S>&, int, int);                           \
  template LinearProgram<S> build_relaxed_lp_orbit(const BasicChannel<S>&, const MacOrbits&, int, int);

NSMAC_INSTANTIATE(double)
NSMAC_INSTANTIATE(Rational)

}  // namespace nsmac
