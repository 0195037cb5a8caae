#include "nsmac/channel.hpp"

#include <bit>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

namespace nsmac {

std::uint64_t channel_hash(const Channel& w) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 1099511628211ULL;
    }
  };
  mix(w.nx1());
  mix(w.nx2());
  mix(w.ny());
  for (Eigen::Index i = 0; i < w.matrix().rows(); ++i)
    for (Eigen::Index j = 0; j < w.matrix().cols(); ++j) mix(std::bit_cast<std::uint64_t>(w.matrix()(i, j) + 0.0));
  return h;
}

ExactChannel parse_channel(const std::string& text) {
  std::istringstream in(text);
  std::map<std::string, int> dims;
  std::vector<std::tuple<int, int, int, Rational>> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    auto fail = [&](const std::string& why) {
      throw std::invalid_argument("channel line " + std::to_string(line_no) + ": " + why);
    };
    if (tok[0] == "nx1" || tok[0] == "nx2" || tok[0] == "ny") {
      if (tok.size() != 2) fail("expected '" + tok[0] + " <count>'");
      dims[tok[0]] = std::stoi(tok[1]);
    } else if (tok.size() == 4) {
      entries.emplace_back(std::stoi(tok[0]), std::stoi(tok[1]), std::stoi(tok[2]), parse_rational(tok[3]));
    } else {
      fail("expected 'x1 x2 y value'");
    }
  }
  for (const char* key : {"nx1", "nx2", "ny"})
    if (!dims.count(key)) throw std::invalid_argument(std::string("channel file lacks ") + key);
  const int nx1 = dims["nx1"], nx2 = dims["nx2"], ny = dims["ny"];
  if (nx1 < 1 || nx2 < 1 || ny < 1) throw std::invalid_argument("channel alphabets must be nonempty");
  ExactChannel::Matrix m = ExactChannel::Matrix::Zero(nx1 * nx2, ny);
  for (auto& [x1, x2, y, v] : entries) {
    if (x1 < 0 || x1 >= nx1 || x2 < 0 || x2 >= nx2 || y < 0 || y >= ny)
      throw std::invalid_argument("channel entry index out of range");
    m(x1 * nx2 + x2, y) = v;
  }
  return ExactChannel(nx1, nx2, ny, std::move(m));
}

ExactChannel read_channel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open channel file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_channel(ss.str());
}

namespace {

template <class Scalar, class Fmt>
std::string format_any(const BasicChannel<Scalar>& w, Fmt fmt) {
  std::ostringstream out;
  out << "nx1 " << w.nx1() << "\nnx2 " << w.nx2() << "\nny " << w.ny() << "\n";
  for (int x1 = 0; x1 < w.nx1(); ++x1)
    for (int x2 = 0; x2 < w.nx2(); ++x2)
      for (int y = 0; y < w.ny(); ++y)
        if (w(x1, x2, y) != 0) out << x1 << ' ' << x2 << ' ' << y << ' ' << fmt(w(x1, x2, y)) << '\n';
  return out.str();
}

}  // namespace

std::string format_channel(const ExactChannel& w) {
  return format_any(w, [](const Rational& q) { return format_rational(q); });
}

std::string format_channel(const Channel& w) {
  return format_any(w, [](double x) {
    std::ostringstream s;
    s << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
    return s.str();
  });
}

}  // namespace nsmac
