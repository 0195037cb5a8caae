#include "nsmac/frontier.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace nsmac {

ExactChannel named_channel(const std::string& name) {
  if (name == "bac") return make_bac<Rational>();
  if (name == "noisy-bac") return make_noisy_bac(Rational(1, 1000), Rational(1, 1000));
  const std::string prefix = "noisy-bac:";
  if (name.rfind(prefix, 0) == 0) {
    const std::string args = name.substr(prefix.size());
    const auto comma = args.find(',');
    const Rational e1 = parse_rational(args.substr(0, comma));
    const Rational e2 = comma == std::string::npos ? e1 : parse_rational(args.substr(comma + 1));
    return make_noisy_bac(e1, e2);
  }
  throw std::invalid_argument("unknown channel " + name);
}

ExactChannel load_channel(const std::string& source) {
  if (source == "bac" || source.rfind("noisy-bac", 0) == 0) return named_channel(source);
  if (std::filesystem::exists(source)) return read_channel_file(source);
  throw std::invalid_argument("unknown channel " + source);
}

void ScanConfig::validate() const {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (k1_lo < 1 || k1_hi < k1_lo) throw std::invalid_argument("empty k1 range");
  if (k2_max < 0) throw std::invalid_argument("k2 bound must be nonnegative");
  if (!(tol > 0 && tol <= 1e-3)) throw std::invalid_argument("tolerance must lie in (0, 1e-3]");
  if (threads < 1) throw std::invalid_argument("threads must be positive");
  if (channel.nx1() == 0) throw std::invalid_argument("no channel loaded");
}

CertifyResult certify_cell(const ScanConfig& cfg, const MacOrbits& orbits, int k1, int k2) {
  return certify_program(cfg.program, cfg.channel, orbits, k1, k2, cfg.certify, cfg.tol, cfg.solve);
}

namespace {

bool passes(const CertifyResult& r) {
  return r.verdict == Certificate::CertifiedOne || r.verdict == Certificate::CertifiedExactOne;
}

int power_capped(int base, int n, int cap) {
  long v = 1;
  for (int i = 0; i < n && v <= cap; ++i) v *= base;
  return int(std::min<long>(v, cap));
}

}  // namespace

ZeroErrorScan zero_error_frontier(const ScanConfig& cfg) {
  cfg.validate();
  const MacOrbits orbits(cfg.channel.nx1(), cfg.channel.nx2(), cfg.channel.ny(), cfg.n);
  const int k2_top = cfg.k2_max > 0 ? cfg.k2_max : power_capped(cfg.channel.nx2(), cfg.n, 1 << 20);
  ZeroErrorScan scan;
  scan.rows.resize(cfg.k1_hi - cfg.k1_lo + 1);
  std::atomic<int> next{0};
  std::mutex log_mutex;

  auto search = [&](ZeroErrorRow& row) {
    auto check = [&](int k2) {
      ++row.solves;
      const auto r = certify_cell(cfg, orbits, row.k1, k2);
      if (r.verdict == Certificate::SolverFailure)
        throw std::runtime_error("solver status " + to_string(r.status) + " at k2=" + std::to_string(k2));
      if (cfg.verbose) {
        std::lock_guard<std::mutex> lock(log_mutex);
        std::cerr << "frontier n=" << cfg.n << " k1=" << row.k1 << " k2=" << k2 << " value=" << r.value << ' '
                  << to_string(r.verdict) << '\n';
      }
      return passes(r);
    };
    if (!check(1)) return;
    int lo = 1, hi = k2_top + 1;
    while (hi - lo > 1) {
      const int mid = lo + (hi - lo) / 2;
      (check(mid) ? lo : hi) = mid;
    }
    row.max_k2 = lo;
  };

  auto worker = [&] {
    for (int i = next++; i < int(scan.rows.size()); i = next++) {
      ZeroErrorRow& row = scan.rows[i];
      row.k1 = cfg.k1_lo + i;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        search(row);
      } catch (const std::exception& e) {
        row.max_k2 = 0;
        row.diagnostic = e.what();
      }
      row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  const int threads = std::min<int>(cfg.threads, int(scan.rows.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  const RateSource source = cfg.program == Program::NonSignaling ? RateSource::ZeroErrorNs : RateSource::ZeroErrorRelaxed;
  for (const auto& row : scan.rows) {
    if (!row.ok() || row.max_k2 < 1) continue;
    scan.frontier.points.push_back(RatePoint{std::log2(double(row.k1)) / cfg.n, std::log2(double(row.max_k2)) / cfg.n,
                                             source,
                                             "n=" + std::to_string(cfg.n) + ";k1=" + std::to_string(row.k1) +
                                                 ";k2=" + std::to_string(row.max_k2)});
  }
  return scan;
}

}  // namespace nsmac
