#pragma once

#include <random>

#include "nsmac/channel.hpp"

namespace nsmac::testing {

inline Channel random_channel(std::mt19937& rng, int nx1, int nx2, int ny) {
  std::exponential_distribution<double> ex(1.0);
  Channel::Matrix m(nx1 * nx2, ny);
  for (int i = 0; i < m.rows(); ++i) {
    double total = 0;
    for (int y = 0; y < ny; ++y) total += (m(i, y) = ex(rng));
    m.row(i) /= total;
  }
  return Channel(nx1, nx2, ny, std::move(m));
}

inline Channel point_channel(int nx1, int nx2) { return Channel(nx1, nx2, 1, Channel::Matrix::Ones(nx1 * nx2, 1)); }

}  // namespace nsmac::testing
