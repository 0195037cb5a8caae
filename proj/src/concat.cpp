#include "nsmac/concat.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace nsmac {

namespace {

constexpr double kClampTol = 1e-10;

double xlog2x(double x) { return x > 0 ? x * std::log2(x) : 0.0; }

double clamp_small(double v, const char* what) {
  if (v >= 0) return v;
  if (v >= -kClampTol) return 0;
  throw std::runtime_error(std::string("induced channel entry ") + what + " is negative: " + std::to_string(v));
}

// Rows of a nearly stochastic matrix rescaled to sum to one.
Channel normalized_channel(int k1, int k2, Channel::Matrix m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = clamp_small(m(i, j), "in explicit matrix");
    const double s = m.row(i).sum();
    if (std::abs(s - 1) > 1e-7) throw std::runtime_error("induced channel row does not sum to 1");
    m.row(i) /= s;
  }
  return Channel(k1, k2, k1 * k2, std::move(m));
}

}  // namespace

double InducedChannelStats::row_sum() const {
  return a + (k1 - 1) * b + (k2 - 1) * c + double(k1 - 1) * (k2 - 1) * d;
}

InducedChannelStats stats_from_masses(int k1, int k2, double A, double B1, double B2) {
  if (k1 < 1 || k2 < 1) throw std::invalid_argument("message counts must be positive");
  InducedChannelStats s;
  s.k1 = k1, s.k2 = k2, s.A = A, s.B1 = B1, s.B2 = B2;
  s.a = clamp_small(A, "a");
  s.b = k1 > 1 ? clamp_small((B1 - A) / (k1 - 1), "b") : 0.0;
  s.c = k2 > 1 ? clamp_small((B2 - A) / (k2 - 1), "c") : 0.0;
  s.d = k1 > 1 && k2 > 1 ? clamp_small((1 - B1 - B2 + A) / (double(k1 - 1) * (k2 - 1)), "d") : 0.0;
  const double total = s.row_sum();
  if (std::abs(total - 1) > 1e-7) throw std::runtime_error("induced channel is not stochastic");
  s.a /= total, s.b /= total, s.c /= total, s.d /= total;
  return s;
}

InducedChannelStats induced_stats(const Channel& w, const MacOrbits& o, const NsCode& code) {
  if (code.r.size() != o.triples.size()) throw std::invalid_argument("code does not match the orbit tables");
  double A = 0, B1 = 0, B2 = 0;
  for (std::size_t t = 0; t < o.triples.size(); ++t) {
    const double v = channel_value_on_orbit(w, o.triples.type(t));
    if (v == 0) continue;
    A += v * code.r[t];
    B1 += v * code.r1[t];
    B2 += v * code.r2[t];
  }
  const double kk = double(code.k1) * code.k2;
  return stats_from_masses(code.k1, code.k2, A / kk, B1 / kk, B2 / kk);
}

InducedInfo induced_info(const InducedChannelStats& s) {
  if (std::abs(s.row_sum() - 1) > 1e-9) throw std::runtime_error("induced channel rows do not sum to 1");
  const double k1 = s.k1, k2 = s.k2;
  InducedInfo info;
  // Uniform messages give a uniform output marginal on [k1] x [k2].
  info.h_j = std::log2(k1 * k2);
  const double h_j_given_i =
      -(xlog2x(s.a) + (k1 - 1) * xlog2x(s.b) + (k2 - 1) * xlog2x(s.c) + (k1 - 1) * (k2 - 1) * xlog2x(s.d));
  const double h_j_given_i2 = -(k1 * xlog2x((s.a + (k1 - 1) * s.b) / k1) +
                                k1 * (k2 - 1) * xlog2x((s.c + (k1 - 1) * s.d) / k1));
  const double h_j_given_i1 = -(k2 * xlog2x((s.a + (k2 - 1) * s.c) / k2) +
                                k2 * (k1 - 1) * xlog2x((s.b + (k2 - 1) * s.d) / k2));
  info.i12 = std::max(0.0, info.h_j - h_j_given_i);
  info.i1_given2 = std::max(0.0, h_j_given_i2 - h_j_given_i);
  info.i2_given1 = std::max(0.0, h_j_given_i1 - h_j_given_i);
  info.i1 = std::max(0.0, info.h_j - h_j_given_i1);
  info.i2 = std::max(0.0, info.h_j - h_j_given_i2);
  return info;
}

std::pair<RatePoint, RatePoint> corner_rates(const InducedChannelStats& s, int n) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  const auto info = induced_info(s);
  const std::string params = "k1=" + std::to_string(s.k1) + ";k2=" + std::to_string(s.k2) + ";n=" + std::to_string(n);
  return {RatePoint{info.i1_given2 / n, info.i2 / n, RateSource::Concat, params},
          RatePoint{info.i1 / n, info.i2_given1 / n, RateSource::Concat, params}};
}

Channel structured_induced_channel(const InducedChannelStats& s) {
  const int k1 = s.k1, k2 = s.k2;
  Channel::Matrix m(k1 * k2, k1 * k2);
  for (int i1 = 0; i1 < k1; ++i1)
    for (int i2 = 0; i2 < k2; ++i2)
      for (int j1 = 0; j1 < k1; ++j1)
        for (int j2 = 0; j2 < k2; ++j2) {
          const bool r1 = i1 == j1, r2 = i2 == j2;
          m(i1 * k2 + i2, j1 * k2 + j2) = r1 && r2 ? s.a : r2 ? s.b : r1 ? s.c : s.d;
        }
  return normalized_channel(k1, k2, std::move(m));
}

Channel induced_channel_explicit(const Box& box, const Channel& wn) {
  if (wn.nx1() != box.nx1 || wn.nx2() != box.nx2 || wn.ny() != box.ny)
    throw std::invalid_argument("box and channel alphabets differ");
  const int k1 = box.k1, k2 = box.k2;
  Channel::Matrix m = Channel::Matrix::Zero(k1 * k2, k1 * k2);
  for (int i1 = 0; i1 < k1; ++i1)
    for (int i2 = 0; i2 < k2; ++i2)
      for (int y = 0; y < box.ny; ++y)
        for (int x1 = 0; x1 < box.nx1; ++x1)
          for (int x2 = 0; x2 < box.nx2; ++x2) {
            const double wv = wn(x1, x2, y);
            if (wv == 0) continue;
            for (int j1 = 0; j1 < k1; ++j1)
              for (int j2 = 0; j2 < k2; ++j2)
                m(i1 * k2 + i2, j1 * k2 + j2) += wv * box(x1, x2, j1, j2, i1, i2, y);
          }
  return normalized_channel(k1, k2, std::move(m));
}

std::vector<std::pair<int, int>> grid_cells(int k1_lo, int k1_hi, int k2_lo, int k2_hi) {
  std::vector<std::pair<int, int>> cells;
  for (int k1 = std::max(1, k1_lo); k1 <= k1_hi; ++k1)
    for (int k2 = std::max(1, k2_lo); k2 <= k2_hi; ++k2) cells.emplace_back(k1, k2);
  return cells;
}

std::vector<std::pair<int, int>> diagonal_cells(int lo, int hi, int width) {
  std::vector<std::pair<int, int>> cells;
  for (int k1 = std::max(1, lo); k1 <= hi; ++k1)
    for (int k2 = std::max({1, lo, k1 - width}); k2 <= std::min(hi, k1 + width); ++k2) cells.emplace_back(k1, k2);
  return cells;
}

ConcatScan concat_scan(const Channel& w, int n, const std::vector<std::pair<int, int>>& cells,
                       const ConcatOptions& options) {
  ConcatScan scan;
  scan.n = n;
  scan.cells.resize(cells.size());
  if (cells.empty()) return scan;
  const MacOrbits orbits(w.nx1(), w.nx2(), w.ny(), n);
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      ConcatCell& cell = scan.cells[i];
      cell.k1 = cells[i].first, cell.k2 = cells[i].second;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const auto res = solve_ns(w, orbits, cell.k1, cell.k2, options.solve);
        cell.status = res.status;
        cell.iterations = res.iterations;
        if (res.status == LpStatus::Optimal) {
          cell.value = res.value;
          cell.stats = induced_stats(w, orbits, res.code);
          std::tie(cell.corner1, cell.corner2) = corner_rates(cell.stats, n);
        } else {
          cell.error = "solver status " + to_string(res.status);
        }
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
      cell.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (options.verbose) {
        std::lock_guard<std::mutex> lock(log_mutex);
        std::cerr << "concat n=" << n << " k1=" << cell.k1 << " k2=" << cell.k2 << " S=" << cell.value
                  << " sum=" << (cell.ok() ? std::max(cell.corner1.r1 + cell.corner1.r2, cell.corner2.r1 + cell.corner2.r2) : 0.0)
                  << " t=" << cell.seconds << "s" << (cell.ok() ? "" : " error: " + cell.error) << '\n';
      }
    }
  };
  const int threads = std::max(1, std::min<int>(options.threads, int(cells.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  std::vector<RatePoint> pts;
  for (const auto& c : scan.cells) {
    if (!c.ok()) continue;
    pts.push_back(c.corner1);
    pts.push_back(c.corner2);
    scan.best_sum_rate = std::max({scan.best_sum_rate, c.corner1.r1 + c.corner1.r2, c.corner2.r1 + c.corner2.r2});
  }
  scan.frontier = nondominated(std::move(pts));
  return scan;
}

void write_concat_json(const ConcatScan& scan, std::ostream& out) {
  nlohmann::json j;
  j["n"] = scan.n;
  j["best_sum_rate"] = scan.best_sum_rate;
  auto& cells = j["cells"] = nlohmann::json::array();
  for (const auto& c : scan.cells) {
    nlohmann::json e{{"k1", c.k1}, {"k2", c.k2}, {"status", to_string(c.status)}, {"seconds", c.seconds},
                     {"iterations", c.iterations}};
    if (c.ok()) {
      e["value"] = c.value;
      e["A"] = c.stats.A;
      e["B1"] = c.stats.B1;
      e["B2"] = c.stats.B2;
      e["corners"] = {{c.corner1.r1, c.corner1.r2}, {c.corner2.r1, c.corner2.r2}};
    } else {
      e["error"] = c.error;
    }
    cells.push_back(std::move(e));
  }
  auto& pts = j["frontier"] = nlohmann::json::array();
  for (const auto& p : scan.frontier.points) pts.push_back({{"R1", p.r1}, {"R2", p.r2}, {"params", p.params}});
  out << j.dump(2) << '\n';
}

}  // namespace nsmac
