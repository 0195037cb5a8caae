#include "nsmac/ns_programs.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace nsmac {

std::vector<double> expand_compact_primal(const std::vector<double>& compact, int triples, int pairs) {
  const NsLayout L{triples, pairs};
  if (int(compact.size()) != L.num_vars()) throw std::invalid_argument("primal size does not match the layout");
  std::vector<double> full(compact);
  for (int t = 0; t < triples; ++t) {
    full[L.r1(t)] = compact[L.r(t)] + compact[L.r1(t)];
    full[L.r2(t)] = compact[L.r(t)] + compact[L.r2(t)];
  }
  return full;
}

NsCode extract_code(const Channel& w, const MacOrbits& o, int k1, int k2, const std::vector<double>& primal) {
  const NsLayout L{int(o.triples.size()), int(o.pairs.size())};
  if (int(primal.size()) != L.num_vars()) throw std::invalid_argument("primal size does not match the orbit program");
  NsCode c;
  c.nx1 = w.nx1(), c.nx2 = w.nx2(), c.ny = w.ny();
  c.n = o.n, c.k1 = k1, c.k2 = k2;
  c.channel_hash = channel_hash(w);
  c.r.assign(primal.begin(), primal.begin() + L.triples);
  c.r1.assign(primal.begin() + L.r1(0), primal.begin() + L.r2(0));
  c.r2.assign(primal.begin() + L.r2(0), primal.begin() + L.p(0));
  c.p.assign(primal.begin() + L.p(0), primal.end());
  double s = 0;
  for (int t = 0; t < L.triples; ++t) s += channel_value_on_orbit(w, o.triples.type(t)) * c.r[t];
  c.value = s / (double(k1) * k2);
  return c;
}

NsResult solve_ns(const Channel& w, int n, int k1, int k2, const SolveOptions& options, Objective objective) {
  const MacOrbits orbits(w.nx1(), w.nx2(), w.ny(), n);
  return solve_ns(w, orbits, k1, k2, options, objective);
}

NsResult solve_ns(const Channel& w, const MacOrbits& orbits, int k1, int k2, const SolveOptions& options,
                  Objective objective) {
  const auto lp = build_ns_lp_orbit_compact(w, orbits, k1, k2, objective);
  NsResult res;
  res.num_vars = lp.num_vars();
  res.num_rows = lp.num_rows();
  const auto sol = solve(lp, options);
  res.status = sol.status;
  res.iterations = sol.iterations;
  if (sol.status != LpStatus::Optimal) return res;
  res.value = sol.value;
  res.code = extract_code(w, orbits, k1, k2,
                          expand_compact_primal(sol.primal, int(orbits.triples.size()), int(orbits.pairs.size())));
  return res;
}

LpSolution<double> solve_relaxed(const Channel& w, const MacOrbits& orbits, int k1, int k2,
                                 const SolveOptions& options) {
  return solve(build_relaxed_lp_orbit(w, orbits, k1, k2), options);
}

CertifyResult certify_program(Program program, const ExactChannel& w, const MacOrbits& orbits, int k1, int k2,
                              SolveMode mode, double tol, const SolveOptions& options) {
  const auto lp = program == Program::NonSignaling ? build_ns_lp_orbit_compact(w, orbits, k1, k2)
                                                   : build_relaxed_lp_orbit(w, orbits, k1, k2);
  return check_value_is_one(lp, mode, tol, options);
}

double code_residual(const Channel& w, const MacOrbits& orbits, const NsCode& code) {
  const auto lp = build_ns_lp_orbit(w, orbits, code.k1, code.k2);
  std::vector<double> x;
  x.reserve(lp.num_vars());
  for (const auto* v : {&code.r, &code.r1, &code.r2, &code.p}) x.insert(x.end(), v->begin(), v->end());
  if (int(x.size()) != lp.num_vars()) throw std::invalid_argument("code does not match the orbit program");
  return max_violation(lp, x);
}

namespace {

void write_list(std::ostream& out, const char* name, const std::vector<double>& v) {
  out << name << ' ' << v.size();
  for (double x : v) out << ' ' << x;
  out << '\n';
}

std::vector<double> read_list(std::istream& in, const char* name) {
  std::string word;
  std::size_t count = 0;
  if (!(in >> word >> count) || word != name) throw std::runtime_error(std::string("expected list ") + name);
  std::vector<double> v(count);
  for (auto& x : v)
    if (!(in >> x)) throw std::runtime_error(std::string("short list ") + name);
  return v;
}

}  // namespace

std::string serialize_code(const NsCode& c) {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "nscode 1\n";
  out << "channel " << std::hex << c.channel_hash << std::dec << ' ' << c.nx1 << ' ' << c.nx2 << ' ' << c.ny << '\n';
  out << "n " << c.n << " k1 " << c.k1 << " k2 " << c.k2 << '\n';
  out << "value " << c.value << '\n';
  write_list(out, "r", c.r);
  write_list(out, "r1", c.r1);
  write_list(out, "r2", c.r2);
  write_list(out, "p", c.p);
  return out.str();
}

NsCode parse_code(const std::string& text) {
  std::istringstream in(text);
  NsCode c;
  std::string a, b, d, e;
  int version = 0;
  if (!(in >> a >> version) || a != "nscode" || version != 1) throw std::runtime_error("not an nscode file");
  if (!(in >> a >> std::hex >> c.channel_hash >> std::dec >> c.nx1 >> c.nx2 >> c.ny) || a != "channel")
    throw std::runtime_error("bad channel line");
  if (!(in >> a >> c.n >> b >> c.k1 >> d >> c.k2) || a != "n" || b != "k1" || d != "k2")
    throw std::runtime_error("bad size line");
  if (!(in >> e >> c.value) || e != "value") throw std::runtime_error("bad value line");
  c.r = read_list(in, "r");
  c.r1 = read_list(in, "r1");
  c.r2 = read_list(in, "r2");
  c.p = read_list(in, "p");
  if (c.r.size() != c.r1.size() || c.r.size() != c.r2.size()) throw std::runtime_error("inconsistent list sizes");
  return c;
}

namespace {

std::size_t checked_pow(int base, int n, std::size_t budget) {
  std::size_t v = 1;
  for (int i = 0; i < n; ++i) {
    if (v > budget / std::size_t(std::max(base, 1))) throw std::length_error("element-level expansion over budget");
    v *= base;
  }
  return v;
}

}  // namespace

ElementCode desymmetrize(const NsCode& code, std::size_t budget) {
  const MacOrbits o(code.nx1, code.nx2, code.ny, code.n);
  if (code.r.size() != o.triples.size() || code.p.size() != o.pairs.size())
    throw std::invalid_argument("code does not match its orbit tables");
  const std::size_t NX1 = checked_pow(code.nx1, code.n, budget), NX2 = checked_pow(code.nx2, code.n, budget),
                    NY = checked_pow(code.ny, code.n, budget);
  if (NX1 * NX2 > budget / NY) throw std::length_error("element-level expansion over budget");
  ElementCode e;
  e.nx1 = int(NX1), e.nx2 = int(NX2), e.ny = int(NY);
  e.r.resize(NX1 * NX2 * NY);
  e.r1.resize(e.r.size());
  e.r2.resize(e.r.size());
  e.p.resize(NX1 * NX2);
  const int n = code.n;
  std::vector<int> d1(n), d2(n), dy(n), tcount(o.triples.alphabet_size()), pcount(o.pairs.alphabet_size());
  auto digits = [n](std::size_t v, int base, std::vector<int>& out) {
    for (int c = n - 1; c >= 0; --c) out[c] = int(v % base), v /= base;
  };
  for (std::size_t X1 = 0; X1 < NX1; ++X1) {
    digits(X1, code.nx1, d1);
    for (std::size_t X2 = 0; X2 < NX2; ++X2) {
      digits(X2, code.nx2, d2);
      std::fill(pcount.begin(), pcount.end(), 0);
      for (int c = 0; c < n; ++c) ++pcount[d1[c] * code.nx2 + d2[c]];
      const std::size_t u = o.pairs.index_of(pcount);
      e.p[X1 * NX2 + X2] = code.p[u] / o.pairs.orbit_size(u).get_d();
      for (std::size_t Y = 0; Y < NY; ++Y) {
        digits(Y, code.ny, dy);
        std::fill(tcount.begin(), tcount.end(), 0);
        for (int c = 0; c < n; ++c) ++tcount[(d1[c] * code.nx2 + d2[c]) * code.ny + dy[c]];
        const std::size_t t = o.triples.index_of(tcount);
        const double size = o.triples.orbit_size(t).get_d();
        const std::size_t idx = (X1 * NX2 + X2) * NY + Y;
        e.r[idx] = code.r[t] / size;
        e.r1[idx] = code.r1[t] / size;
        e.r2[idx] = code.r2[t] / size;
      }
    }
  }
  return e;
}

Box reconstruct_box(const NsCode& code, std::size_t budget) {
  const ElementCode e = desymmetrize(code, budget);
  const int k1 = code.k1, k2 = code.k2;
  const std::size_t kk = std::size_t(k1) * k2;
  const std::size_t per_input = std::size_t(e.nx1) * e.nx2 * kk;
  if (per_input > budget / (kk * e.ny)) throw std::length_error("box over budget");
  Box box;
  box.nx1 = e.nx1, box.nx2 = e.nx2, box.ny = e.ny, box.k1 = k1, box.k2 = k2;
  box.data.assign(kk * e.ny * per_input, 0.0);
  const double K = double(kk);
  for (int i1 = 0; i1 < k1; ++i1)
    for (int i2 = 0; i2 < k2; ++i2)
      for (int y = 0; y < e.ny; ++y)
        for (int x1 = 0; x1 < e.nx1; ++x1)
          for (int x2 = 0; x2 < e.nx2; ++x2) {
            const std::size_t t = (std::size_t(x1) * e.nx2 + x2) * e.ny + y;
            const double r = e.r[t], r1 = e.r1[t], r2 = e.r2[t], p = e.p[std::size_t(x1) * e.nx2 + x2];
            for (int j1 = 0; j1 < k1; ++j1)
              for (int j2 = 0; j2 < k2; ++j2) {
                double v;
                if (j1 == i1 && j2 == i2) v = r / K;
                else if (j2 == i2) v = (r1 - r) / (K * (k1 - 1));
                else if (j1 == i1) v = (r2 - r) / (K * (k2 - 1));
                else v = (p - r1 - r2 + r) / (K * (k1 - 1) * (k2 - 1));
                box.data[box.index(x1, x2, j1, j2, i1, i2, y)] = v;
              }
          }
  return box;
}

BoxReport check_box(const Box& b, const Channel& wn) {
  if (wn.nx1() != b.nx1 || wn.nx2() != b.nx2 || wn.ny() != b.ny)
    throw std::invalid_argument("box and channel alphabets differ");
  BoxReport rep;
  rep.min_entry = *std::min_element(b.data.begin(), b.data.end());
  for (int i1 = 0; i1 < b.k1; ++i1)
    for (int i2 = 0; i2 < b.k2; ++i2)
      for (int y = 0; y < b.ny; ++y) {
        double total = 0;
        for (int x1 = 0; x1 < b.nx1; ++x1)
          for (int x2 = 0; x2 < b.nx2; ++x2) {
            for (int j1 = 0; j1 < b.k1; ++j1)
              for (int j2 = 0; j2 < b.k2; ++j2) total += b(x1, x2, j1, j2, i1, i2, y);
            rep.success += wn(x1, x2, y) * b(x1, x2, i1, i2, i1, i2, y);
          }
        rep.normalization = std::max(rep.normalization, std::abs(total - 1));
      }
  rep.success /= double(b.k1) * b.k2;
  auto sum_j = [&](int x1, int x2, int i1, int i2, int y) {
    double s = 0;
    for (int j1 = 0; j1 < b.k1; ++j1)
      for (int j2 = 0; j2 < b.k2; ++j2) s += b(x1, x2, j1, j2, i1, i2, y);
    return s;
  };
  for (int i1 = 0; i1 < b.k1; ++i1)
    for (int i2 = 0; i2 < b.k2; ++i2)
      for (int x1 = 0; x1 < b.nx1; ++x1)
        for (int x2 = 0; x2 < b.nx2; ++x2) {
          const double ref = sum_j(x1, x2, i1, i2, 0);
          for (int y = 1; y < b.ny; ++y)
            rep.ns_receiver = std::max(rep.ns_receiver, std::abs(sum_j(x1, x2, i1, i2, y) - ref));
        }
  for (int j1 = 0; j1 < b.k1; ++j1)
    for (int j2 = 0; j2 < b.k2; ++j2)
      for (int y = 0; y < b.ny; ++y) {
        for (int i2 = 0; i2 < b.k2; ++i2)
          for (int x2 = 0; x2 < b.nx2; ++x2) {
            double ref = 0;
            for (int i1 = 0; i1 < b.k1; ++i1) {
              double s = 0;
              for (int x1 = 0; x1 < b.nx1; ++x1) s += b(x1, x2, j1, j2, i1, i2, y);
              if (i1 == 0) ref = s;
              else rep.ns_sender1 = std::max(rep.ns_sender1, std::abs(s - ref));
            }
          }
        for (int i1 = 0; i1 < b.k1; ++i1)
          for (int x1 = 0; x1 < b.nx1; ++x1) {
            double ref = 0;
            for (int i2 = 0; i2 < b.k2; ++i2) {
              double s = 0;
              for (int x2 = 0; x2 < b.nx2; ++x2) s += b(x1, x2, j1, j2, i1, i2, y);
              if (i2 == 0) ref = s;
              else rep.ns_sender2 = std::max(rep.ns_sender2, std::abs(s - ref));
            }
          }
      }
  return rep;
}

double indep_ns_value(const Channel& w, const IndepNsStrategy& s) {
  const int ny = w.ny();
  double total = 0;
  for (int x1 = 0; x1 < w.nx1(); ++x1)
    for (int x2 = 0; x2 < w.nx2(); ++x2)
      for (int y = 0; y < ny; ++y)
        total += w(x1, x2, y) * (s.p2[x2] * s.r1[x1 * ny + y] + s.p1[x1] * s.r2[x2 * ny + y]);
  return total / (2.0 * s.k1 * s.k2);
}

namespace {

// Best (r, p) for one side given linear weights a[x*ny+y] on r and b[x] on p.
void best_response(int nx, int ny, int k, const std::vector<double>& a, const std::vector<double>& b,
                   std::vector<double>& r, std::vector<double>& p) {
  LinearProgram<double> lp;
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y) lp.add_variable(a[x * ny + y]);
  for (int x = 0; x < nx; ++x) lp.add_variable(b[x]);
  const int off = nx * ny;
  for (int y = 0; y < ny; ++y) {
    LpRow<double> row;
    for (int x = 0; x < nx; ++x) row.index.push_back(x * ny + y), row.value.push_back(1);
    row.relation = Relation::Equal, row.rhs = 1;
    lp.add_row(std::move(row));
  }
  {
    LpRow<double> row;
    for (int x = 0; x < nx; ++x) row.index.push_back(off + x), row.value.push_back(1);
    row.relation = Relation::Equal, row.rhs = k;
    lp.add_row(std::move(row));
  }
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y) {
      LpRow<double> row;
      row.index = {x * ny + y, off + x};
      row.value = {1, -1};
      row.relation = Relation::LessEqual, row.rhs = 0;
      lp.add_row(std::move(row));
    }
  SolveOptions opt;
  const auto sol = solve(lp, opt);
  if (sol.status != LpStatus::Optimal) return;
  r.assign(sol.primal.begin(), sol.primal.begin() + off);
  p.assign(sol.primal.begin() + off, sol.primal.end());
  for (auto& v : r) v = std::max(v, 0.0);
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y) r[x * ny + y] = std::min(r[x * ny + y], p[x] = std::max(p[x], 0.0));
}

IndepNsStrategy alternate(const Channel& w, IndepNsStrategy s, double tol) {
  const int nx1 = w.nx1(), nx2 = w.nx2(), ny = w.ny();
  s.value = indep_ns_value(w, s);
  for (int round = 0; round < 1000; ++round) {
    const double before = s.value;
    std::vector<double> a(nx1 * ny, 0.0), b(nx1, 0.0);
    for (int x1 = 0; x1 < nx1; ++x1)
      for (int x2 = 0; x2 < nx2; ++x2)
        for (int y = 0; y < ny; ++y) {
          a[x1 * ny + y] += w(x1, x2, y) * s.p2[x2];
          b[x1] += w(x1, x2, y) * s.r2[x2 * ny + y];
        }
    best_response(nx1, ny, s.k1, a, b, s.r1, s.p1);
    std::vector<double> c(nx2 * ny, 0.0), d(nx2, 0.0);
    for (int x1 = 0; x1 < nx1; ++x1)
      for (int x2 = 0; x2 < nx2; ++x2)
        for (int y = 0; y < ny; ++y) {
          c[x2 * ny + y] += w(x1, x2, y) * s.p1[x1];
          d[x2] += w(x1, x2, y) * s.r1[x1 * ny + y];
        }
    best_response(nx2, ny, s.k2, c, d, s.r2, s.p2);
    s.value = indep_ns_value(w, s);
    if (s.value - before < tol) break;
  }
  return s;
}

void uniform_side(int nx, int ny, int k, std::vector<double>& r, std::vector<double>& p) {
  r.assign(nx * ny, 1.0 / nx);
  p.assign(nx, double(k) / nx);
}

void random_side(std::mt19937& rng, int nx, int ny, int k, std::vector<double>& r, std::vector<double>& p) {
  std::exponential_distribution<double> ex(1.0);
  p.resize(nx);
  double total = 0;
  for (auto& v : p) total += (v = ex(rng));
  for (auto& v : p) v *= k / total;
  r.resize(nx * ny);
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y) r[x * ny + y] = p[x] / k;
}

void classical_side(const std::vector<int>& e, const std::vector<int>& d, int nx, int ny, std::vector<double>& r,
                    std::vector<double>& p) {
  r.assign(nx * ny, 0.0);
  p.assign(nx, 0.0);
  for (int x : e) p[x] += 1;
  for (int y = 0; y < ny; ++y) r[e[d[y]] * ny + y] = 1;
}

}  // namespace

IndepNsStrategy indep_ns_sum(const Channel& w, int k1, int k2, int restarts, double tol) {
  if (k1 < 1 || k2 < 1) throw std::invalid_argument("message counts must be positive");
  const int nx1 = w.nx1(), nx2 = w.nx2(), ny = w.ny();
  std::vector<IndepNsStrategy> seeds;
  IndepNsStrategy s;
  s.k1 = k1, s.k2 = k2;
  uniform_side(nx1, ny, k1, s.r1, s.p1);
  uniform_side(nx2, ny, k2, s.r2, s.p2);
  seeds.push_back(s);
  try {
    const auto classical = brute_force_success(w, k1, k2, Objective::Sum, 50'000'000ULL);
    classical_side(classical.code.e1, classical.code.d1, nx1, ny, s.r1, s.p1);
    classical_side(classical.code.e2, classical.code.d2, nx2, ny, s.r2, s.p2);
    seeds.push_back(s);
  } catch (const BudgetExceeded&) {
  }
  std::mt19937 rng(20240611u);
  while (int(seeds.size()) < std::max(restarts, 1)) {
    random_side(rng, nx1, ny, k1, s.r1, s.p1);
    random_side(rng, nx2, ny, k2, s.r2, s.p2);
    seeds.push_back(s);
  }
  IndepNsStrategy best;
  best.value = -1;
  for (const auto& seed : seeds) {
    // The seed itself is feasible; keep it if alternation cannot improve on it.
    IndepNsStrategy start = seed;
    start.value = indep_ns_value(w, start);
    IndepNsStrategy out = alternate(w, start, tol);
    if (out.value < start.value) out = start;
    if (out.value > best.value + 1e-15) best = std::move(out);
  }
  return best;
}

double nssr_factor(int k, int l) {
  if (k < 1 || l < 1) throw std::invalid_argument("factor needs positive arguments");
  return double(k) / l * (1 - std::pow(1 - 1.0 / k, l));
}

NssrReport check_nssr_inequality(const Channel& w, int k1, int k2, int l1, int l2, int restarts) {
  NssrReport rep;
  rep.factor = std::min(nssr_factor(k1, l1), nssr_factor(k2, l2));
  rep.indep_lower_bound = indep_ns_sum(w, k1, k2, restarts).value;
  rep.lhs = rep.factor * rep.indep_lower_bound;
  rep.rhs = brute_force_success(w, l1, l2, Objective::Sum).value;
  rep.holds = rep.lhs <= rep.rhs + 1e-9;
  return rep;
}

}  // namespace nsmac
