#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <gmp.h>

#include "json.hpp"
#include "nsmac/concat.hpp"
#include "nsmac/frontier.hpp"

using namespace nsmac;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;

struct SolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string channel = "bac";
  int n = 1;
  std::string out;
  std::string manifest;
  int threads = 1;
  bool verbose = false;
};

struct CertifyFlag {
  SolveMode mode = SolveMode::Exact;
  double tol = 1e-7;
};

// "exact", "float" or "float:TOL"; empty picks the default for n.
CertifyFlag parse_certify(const std::string& text, int n) {
  CertifyFlag f;
  f.mode = ScanConfig::default_certify(n);
  if (text.empty()) return f;
  if (text == "exact") {
    f.mode = SolveMode::Exact;
  } else if (text.rfind("float", 0) == 0) {
    f.mode = SolveMode::Float;
    if (text.size() > 5) {
      if (text[5] != ':') throw std::invalid_argument("bad --certify value " + text);
      f.tol = std::stod(text.substr(6));
    }
  } else {
    throw std::invalid_argument("bad --certify value " + text);
  }
  if (!(f.tol > 0 && f.tol <= 1e-3)) throw std::invalid_argument("certification tolerance must lie in (0, 1e-3]");
  return f;
}

Program parse_program(const std::string& mode) {
  if (mode == "ns") return Program::NonSignaling;
  if (mode == "relaxed") return Program::Relaxed;
  throw std::invalid_argument("unknown mode " + mode);
}

std::pair<int, int> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    const int v = std::stoi(text);
    return {v, v};
  }
  return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(to_double(parse_rational(item)));
  return v;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return s.str();
}

std::string csv_of(const Frontier& f) {
  std::ostringstream s;
  write_frontier_csv(f, s);
  return s.str();
}

class Run {
 public:
  Run(std::string command, const Common& common) : command_(std::move(command)), common_(common) {
    config_["channel"] = common.channel;
    config_["n"] = common.n;
  }

  json& config() { return config_; }
  json& results() { return results_; }

  // Result file: the payload goes to --out, the manifest next to it unless --manifest is given.
  void finish(const std::string& payload) {
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (!common_.out.empty()) write_text(common_.out, payload);
    std::string path = common_.manifest;
    if (path.empty() && !common_.out.empty()) path = common_.out + ".manifest.json";
    if (path.empty()) return;
    json m;
    m["command"] = command_;
    m["config"] = config_;
    m["results"] = results_;
    m["seconds"] = seconds;
    m["versions"] = {{"nsmac", kVersion},
                     {"compiler", __VERSION__},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)},
                     {"gmp", gmp_version}};
    m["output"] = common_.out;
    write_text(path, m.dump(2) + "\n");
  }

 private:
  std::string command_;
  Common common_;
  json config_, results_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

SolveOptions solve_options() { return default_solve_options(); }

int cmd_success(const Common& c, int k1, int k2, const std::string& mode, const std::string& certify) {
  const auto w = load_channel(c.channel);
  const auto program = parse_program(mode);
  const auto cert = parse_certify(certify, c.n);
  const MacOrbits orbits(w.nx1(), w.nx2(), w.ny(), c.n);
  const auto r = certify_program(program, w, orbits, k1, k2, cert.mode, cert.tol, solve_options());
  if (r.verdict == Certificate::SolverFailure) throw SolverFailure("solver status " + to_string(r.status));
  std::cout << "value " << fmt(r.value) << '\n';
  if (!r.exact_value.empty()) std::cout << "exact " << r.exact_value << '\n';
  std::cout << "verdict " << to_string(r.verdict) << '\n';
  Run run("success", c);
  run.config().update({{"k1", k1}, {"k2", k2}, {"mode", mode},
                       {"certify", cert.mode == SolveMode::Exact ? "exact" : "float:" + fmt(cert.tol)}});
  json res{{"value", r.value}, {"verdict", to_string(r.verdict)}, {"iterations", r.iterations}};
  if (!r.exact_value.empty()) res["exact_value"] = r.exact_value;
  run.results() = res;
  run.finish(res.dump(2) + "\n");
  return 0;
}

int cmd_frontier(const Common& c, const std::string& k1_range, int k2_max, const std::string& mode,
                 const std::string& certify) {
  ScanConfig cfg;
  cfg.channel_source = c.channel;
  cfg.channel = load_channel(c.channel);
  cfg.n = c.n;
  cfg.program = parse_program(mode);
  const auto cert = parse_certify(certify, c.n);
  cfg.certify = cert.mode;
  cfg.tol = cert.tol;
  std::tie(cfg.k1_lo, cfg.k1_hi) = parse_range(k1_range);
  cfg.k2_max = k2_max;
  cfg.threads = c.threads;
  cfg.verbose = c.verbose;
  const auto scan = zero_error_frontier(cfg);
  Run run("frontier", c);
  run.config().update({{"k1", k1_range}, {"k2_max", k2_max}, {"mode", mode},
                       {"certify", cert.mode == SolveMode::Exact ? "exact" : "float:" + fmt(cert.tol)}});
  bool failed = false;
  for (const auto& row : scan.rows) {
    std::cout << "k1 " << row.k1 << " max_k2 " << row.max_k2 << " solves " << row.solves;
    if (!row.ok()) std::cout << " error: " << row.diagnostic;
    std::cout << '\n';
    json r{{"k1", row.k1}, {"max_k2", row.max_k2}, {"solves", row.solves}, {"seconds", row.seconds}};
    if (!row.ok()) r["error"] = row.diagnostic, failed = true;
    run.results().push_back(r);
  }
  for (const auto& p : scan.frontier.points) std::cout << "point " << fmt(p.r1) << ' ' << fmt(p.r2) << '\n';
  run.finish(csv_of(scan.frontier));
  return failed ? kExitSolver : 0;
}

int cmd_region(const Common& c, const std::string& kind, int grid) {
  RegionOptions opt;
  opt.grid = grid;
  RegionResult res;
  if (kind == "classical") {
    res = classical_region(load_channel(c.channel).cast<double>(), opt);
  } else if (kind == "relaxed") {
    res = relaxed_region(load_channel(c.channel).cast<double>(), opt);
  } else if (kind == "bac-closed-form" || kind == "relaxed-closed-form") {
    if (c.channel != "bac") throw std::invalid_argument("the closed form applies to the bac channel only");
    res = bac_relaxed_closed_form_region();
  } else {
    throw std::invalid_argument("unknown region kind " + kind);
  }
  std::cout << "max_sum_rate " << fmt(res.max_sum_rate) << '\n';
  std::cout << "points " << res.frontier.points.size() << '\n';
  Run run("region", c);
  run.config().update({{"kind", kind}, {"grid", grid}});
  run.results() = {{"max_sum_rate", res.max_sum_rate}, {"points", res.frontier.points.size()},
                   {"evaluations", res.evaluations}};
  run.finish(csv_of(res.frontier));
  return 0;
}

int cmd_concat(const Common& c, const std::string& grid, const std::string& diagonal, const std::string& meta) {
  std::vector<std::pair<int, int>> cells;
  if (!diagonal.empty()) {
    int lo = 0, hi = 0, width = 0;
    char s1 = 0, s2 = 0;
    std::istringstream in(diagonal);
    if (!(in >> lo >> s1 >> hi >> s2 >> width) || s1 != ':' || s2 != ':')
      throw std::invalid_argument("--diagonal expects LO:HI:WIDTH");
    cells = diagonal_cells(lo, hi, width);
  } else {
    const auto slash = grid.find('x');
    if (slash == std::string::npos) throw std::invalid_argument("--grid expects K1LO:K1HI x K2LO:K2HI");
    const auto [a, b] = parse_range(grid.substr(0, slash));
    const auto [d, e] = parse_range(grid.substr(slash + 1));
    cells = grid_cells(a, b, d, e);
  }
  ConcatOptions opt;
  opt.threads = c.threads;
  opt.verbose = c.verbose;
  const auto scan = concat_scan(load_channel(c.channel).cast<double>(), c.n, cells, opt);
  bool failed = false;
  for (const auto& cell : scan.cells) {
    std::cout << "k1 " << cell.k1 << " k2 " << cell.k2;
    if (cell.ok())
      std::cout << " S " << fmt(cell.value) << " corners (" << fmt(cell.corner1.r1) << ", " << fmt(cell.corner1.r2)
                << ") (" << fmt(cell.corner2.r1) << ", " << fmt(cell.corner2.r2) << ")";
    else
      std::cout << " error: " << cell.error, failed = true;
    std::cout << '\n';
  }
  std::cout << "best_sum_rate " << fmt(scan.best_sum_rate) << '\n';
  Run run("concat", c);
  run.config().update({{"grid", grid}, {"diagonal", diagonal}});
  run.results() = {{"best_sum_rate", scan.best_sum_rate}, {"cells", scan.cells.size()}};
  std::string meta_path = meta;
  if (meta_path.empty() && !c.out.empty()) meta_path = c.out + ".json";
  if (!meta_path.empty()) {
    std::ofstream out(meta_path);
    write_concat_json(scan, out);
  }
  run.finish(csv_of(scan.frontier));
  return failed ? kExitSolver : 0;
}

int cmd_converse(const Common& c, double eps, const std::string& p1, const std::string& p2) {
  const auto w = load_channel(c.channel).cast<double>();
  JointDist law = JointDist::uniform_product(w.nx1(), w.nx2());
  if (!p1.empty() || !p2.empty()) {
    const auto a = parse_list(p1), b = parse_list(p2);
    if (int(a.size()) != w.nx1() || int(b.size()) != w.nx2()) throw std::invalid_argument("input law sizes do not match");
    law = JointDist::product(Eigen::Map<const Eigen::VectorXd>(a.data(), a.size()),
                             Eigen::Map<const Eigen::VectorXd>(b.data(), b.size()));
  }
  const auto caps = one_shot_converse(w, law, eps);
  std::cout << "log2_k1 <= " << fmt(caps.r1) << "\nlog2_k2 <= " << fmt(caps.r2) << "\nlog2_k1k2 <= " << fmt(caps.sum)
            << '\n';
  Run run("converse", c);
  run.config().update({{"eps", eps}, {"p1", p1}, {"p2", p2}});
  json res{{"r1", caps.r1}, {"r2", caps.r2}, {"sum", caps.sum}};
  run.results() = res;
  run.finish(res.dump(2) + "\n");
  return 0;
}

int cmd_indep(const Common& c, int k1, int k2, int l1, int l2, int restarts) {
  const auto w = load_channel(c.channel).cast<double>();
  const auto s = indep_ns_sum(w, k1, k2, restarts);
  const auto rep = check_nssr_inequality(w, k1, k2, l1, l2, restarts);
  std::cout << "indep_lower_bound " << fmt(s.value) << '\n';
  std::cout << "nssr factor " << fmt(rep.factor) << " lhs " << fmt(rep.lhs) << " rhs " << fmt(rep.rhs) << ' '
            << (rep.holds ? "holds" : "violated") << '\n';
  Run run("indep", c);
  run.config().update({{"k1", k1}, {"k2", k2}, {"l1", l1}, {"l2", l2}, {"restarts", restarts}});
  json res{{"indep_lower_bound", s.value}, {"factor", rep.factor}, {"lhs", rep.lhs}, {"rhs", rep.rhs},
           {"holds", rep.holds}};
  run.results() = res;
  run.finish(res.dump(2) + "\n");
  return 0;
}

int cmd_dump(const Common& c, int k1, int k2, const std::string& mode, const std::string& form, bool exact) {
  const auto w = load_channel(c.channel);
  const auto program = parse_program(mode);
  LinearProgram<Rational> lp;
  if (form == "element") {
    const auto wn = tensor_power(w, c.n);
    lp = program == Program::NonSignaling ? build_ns_lp_element(wn, k1, k2) : build_relaxed_lp_element(wn, k1, k2);
  } else {
    const MacOrbits orbits(w.nx1(), w.nx2(), w.ny(), c.n);
    if (form == "orbit") lp = build_program(program, w, orbits, k1, k2);
    else if (form == "compact" && program == Program::NonSignaling) lp = build_ns_lp_orbit_compact(w, orbits, k1, k2);
    else throw std::invalid_argument("unknown form " + form + " for mode " + mode);
  }
  std::ostringstream mps;
  if (exact) write_mps(lp, mps);
  else write_mps(lp.cast<double>(), mps);
  std::cerr << "vars " << lp.num_vars() << " rows " << lp.num_rows() << '\n';
  if (c.out.empty()) std::cout << mps.str();
  Run run("dump-lp", c);
  run.config().update({{"k1", k1}, {"k2", k2}, {"mode", mode}, {"form", form}, {"exact", exact}});
  run.results() = {{"vars", lp.num_vars()}, {"rows", lp.num_rows()}};
  run.finish(mps.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-signaling assisted multiple access channel coding"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Common common;
  auto add_common = [&](CLI::App* sub, bool with_n = true) {
    sub->add_option("--channel", common.channel, "bac, noisy-bac, noisy-bac:E1,E2 or a channel file");
    if (with_n) sub->add_option("-n", common.n, "number of channel uses")->check(CLI::Range(1, 64));
    sub->add_option("--out", common.out, "result file");
    sub->add_option("--manifest", common.manifest, "run manifest (default: <out>.manifest.json)");
    sub->add_option("--threads", common.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("-v,--verbose", common.verbose, "progress on stderr");
  };

  int k1 = 1, k2 = 1, l1 = 1, l2 = 1, k2_max = 0, grid = 512, restarts = 4;
  std::string mode = "ns", certify, k1_range = "1", kind = "classical", concat_grid, diagonal, meta, form = "compact",
              p1, p2;
  double eps = 0;
  bool exact = false;

  auto* success = app.add_subcommand("success", "value of a program with certification verdict");
  add_common(success);
  success->add_option("--k1", k1)->required()->check(CLI::PositiveNumber);
  success->add_option("--k2", k2)->required()->check(CLI::PositiveNumber);
  success->add_option("--mode", mode, "ns or relaxed")->check(CLI::IsMember({"ns", "relaxed"}));
  success->add_option("--certify", certify, "exact, float or float:TOL");

  auto* certify_cmd = app.add_subcommand("certify", "exact rational check of S = 1");
  add_common(certify_cmd);
  certify_cmd->add_option("--k1", k1)->required()->check(CLI::PositiveNumber);
  certify_cmd->add_option("--k2", k2)->required()->check(CLI::PositiveNumber);
  certify_cmd->add_option("--mode", mode, "ns or relaxed")->check(CLI::IsMember({"ns", "relaxed"}));

  auto* frontier = app.add_subcommand("frontier", "zero-error frontier scan");
  add_common(frontier);
  frontier->add_option("--k1", k1_range, "K or LO:HI");
  frontier->add_option("--k2-max", k2_max, "upper end of the k2 search (default |X2|^n)");
  frontier->add_option("--mode", mode, "ns or relaxed")->check(CLI::IsMember({"ns", "relaxed"}));
  frontier->add_option("--certify", certify, "exact, float or float:TOL");

  auto* region = app.add_subcommand("region", "classical or relaxed capacity region");
  add_common(region, false);
  region->add_option("--kind", kind, "classical, relaxed or bac-closed-form");
  region->add_option("--grid", grid, "input law grid resolution")->check(CLI::Range(2, 1 << 16));

  auto* concat = app.add_subcommand("concat", "concatenated-code scan");
  add_common(concat);
  auto* grid_opt = concat->add_option("--grid", concat_grid, "K1LO:K1HI x K2LO:K2HI, e.g. 2:4x2:4");
  auto* diag_opt = concat->add_option("--diagonal", diagonal, "LO:HI:WIDTH");
  grid_opt->excludes(diag_opt);
  concat->add_option("--meta", meta, "per-cell JSON (default: <out>.json)");

  auto* converse = app.add_subcommand("converse", "one-shot converse bounds");
  add_common(converse, false);
  converse->add_option("--eps", eps, "error probability")->check(CLI::Range(0.0, 0.999999));
  converse->add_option("--p1", p1, "input law of sender 1, comma separated");
  converse->add_option("--p2", p2, "input law of sender 2, comma separated");

  auto* indep = app.add_subcommand("indep", "independent non-signaling heuristic");
  add_common(indep, false);
  indep->add_option("--k1", k1)->check(CLI::PositiveNumber);
  indep->add_option("--k2", k2)->check(CLI::PositiveNumber);
  indep->add_option("--l1", l1)->check(CLI::PositiveNumber);
  indep->add_option("--l2", l2)->check(CLI::PositiveNumber);
  indep->add_option("--restarts", restarts)->check(CLI::PositiveNumber);

  auto* dump = app.add_subcommand("dump-lp", "write a program in MPS format");
  add_common(dump);
  dump->add_option("--k1", k1)->required()->check(CLI::PositiveNumber);
  dump->add_option("--k2", k2)->required()->check(CLI::PositiveNumber);
  dump->add_option("--mode", mode, "ns or relaxed")->check(CLI::IsMember({"ns", "relaxed"}));
  dump->add_option("--form", form, "element, orbit or compact")->check(CLI::IsMember({"element", "orbit", "compact"}));
  dump->add_flag("--exact", exact, "rational coefficients");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*success) return cmd_success(common, k1, k2, mode, certify);
    if (*certify_cmd) return cmd_success(common, k1, k2, mode, "exact");
    if (*frontier) return cmd_frontier(common, k1_range, k2_max, mode, certify);
    if (*region) return cmd_region(common, kind, grid);
    if (*concat) {
      if (concat_grid.empty() && diagonal.empty()) throw std::invalid_argument("concat needs --grid or --diagonal");
      return cmd_concat(common, concat_grid, diagonal, meta);
    }
    if (*converse) return cmd_converse(common, eps, p1, p2);
    if (*indep) return cmd_indep(common, k1, k2, l1, l2, restarts);
    if (*dump) return cmd_dump(common, k1, k2, mode, form, exact);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
