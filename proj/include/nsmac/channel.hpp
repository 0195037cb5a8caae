#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "nsmac/scalar.hpp"

namespace nsmac {

/// Finite two-sender channel W(y|x1,x2). Row index is x1 * nx2 + x2, column is y.
template <class Scalar>
class BasicChannel {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  BasicChannel() = default;

  BasicChannel(int nx1, int nx2, int ny, Matrix w) : nx1_(nx1), nx2_(nx2), ny_(ny), w_(std::move(w)) {
    if (nx1 < 1 || nx2 < 1 || ny < 1) throw std::invalid_argument("channel alphabets must be nonempty");
    if (w_.rows() != Eigen::Index(nx1) * nx2 || w_.cols() != ny)
      throw std::invalid_argument("channel matrix has wrong shape");
    for (Eigen::Index i = 0; i < w_.rows(); ++i) {
      Scalar total = 0;
      for (Eigen::Index j = 0; j < w_.cols(); ++j) {
        if (w_(i, j) < 0) throw std::invalid_argument("negative channel entry");
        total += w_(i, j);
      }
      if (ScalarTraits<Scalar>::abs(Scalar(total - 1)) > tolerance())
        throw std::invalid_argument("channel row does not sum to 1");
    }
  }

  int nx1() const { return nx1_; }
  int nx2() const { return nx2_; }
  int ny() const { return ny_; }
  int num_inputs() const { return nx1_ * nx2_; }
  int num_triples() const { return nx1_ * nx2_ * ny_; }

  const Scalar& operator()(int x1, int x2, int y) const { return w_(x1 * nx2_ + x2, y); }
  const Matrix& matrix() const { return w_; }

  template <class Other>
  BasicChannel<Other> cast() const {
    typename BasicChannel<Other>::Matrix m(w_.rows(), w_.cols());
    for (Eigen::Index i = 0; i < w_.rows(); ++i)
      for (Eigen::Index j = 0; j < w_.cols(); ++j) m(i, j) = convert<Other>(w_(i, j));
    return BasicChannel<Other>(nx1_, nx2_, ny_, std::move(m));
  }

  friend bool operator==(const BasicChannel& a, const BasicChannel& b) {
    return a.nx1_ == b.nx1_ && a.nx2_ == b.nx2_ && a.ny_ == b.ny_ && a.w_ == b.w_;
  }

 private:
  static Scalar tolerance() {
    if constexpr (ScalarTraits<Scalar>::exact) return Scalar(0);
    else return Scalar(1e-12);
  }

  template <class Other>
  static Other convert(const Scalar& x) {
    if constexpr (std::is_same_v<Other, Scalar>) return x;
    else if constexpr (std::is_same_v<Other, double>) return to_double(x);
    else return Other(x);
  }

  int nx1_ = 0, nx2_ = 0, ny_ = 0;
  Matrix w_;
};

using Channel = BasicChannel<double>;
using ExactChannel = BasicChannel<Rational>;

/// Point-to-point channel: rows are inputs, columns outputs.
using P2PChannel = Eigen::MatrixXd;

template <class Scalar = double>
BasicChannel<Scalar> make_bac() {
  typename BasicChannel<Scalar>::Matrix w = BasicChannel<Scalar>::Matrix::Zero(4, 3);
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2) w(x1 * 2 + x2, x1 + x2) = 1;
  return BasicChannel<Scalar>(2, 2, 3, std::move(w));
}

/// Binary adder channel whose inputs are flipped independently with probabilities eps1, eps2.
template <class Scalar = double>
BasicChannel<Scalar> make_noisy_bac(const Scalar& eps1, const Scalar& eps2) {
  if (eps1 < 0 || eps1 > 1 || eps2 < 0 || eps2 > 1)
    throw std::invalid_argument("flip probabilities must lie in [0,1]");
  typename BasicChannel<Scalar>::Matrix w = BasicChannel<Scalar>::Matrix::Zero(4, 3);
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2)
      for (int f1 = 0; f1 < 2; ++f1)
        for (int f2 = 0; f2 < 2; ++f2) {
          Scalar p1 = f1 ? eps1 : Scalar(1 - eps1);
          Scalar p2 = f2 ? eps2 : Scalar(1 - eps2);
          w(x1 * 2 + x2, (x1 ^ f1) + (x2 ^ f2)) += p1 * p2;
        }
  return BasicChannel<Scalar>(2, 2, 3, std::move(w));
}

/// (a ⊗ b)(y y' | x1 x1', x2 x2') = a(y|x1 x2) b(y'|x1' x2'), with pairs indexed as x * size' + x'.
template <class Scalar>
BasicChannel<Scalar> tensor(const BasicChannel<Scalar>& a, const BasicChannel<Scalar>& b) {
  const std::int64_t nx1 = std::int64_t(a.nx1()) * b.nx1();
  const std::int64_t nx2 = std::int64_t(a.nx2()) * b.nx2();
  const std::int64_t ny = std::int64_t(a.ny()) * b.ny();
  if (nx1 * nx2 * ny > (std::int64_t(1) << 31)) throw std::overflow_error("tensor product too large");
  typename BasicChannel<Scalar>::Matrix w(nx1 * nx2, ny);
  for (int x1 = 0; x1 < a.nx1(); ++x1)
    for (int u1 = 0; u1 < b.nx1(); ++u1)
      for (int x2 = 0; x2 < a.nx2(); ++x2)
        for (int u2 = 0; u2 < b.nx2(); ++u2) {
          const std::int64_t row = (x1 * b.nx1() + u1) * nx2 + (x2 * b.nx2() + u2);
          for (int y = 0; y < a.ny(); ++y)
            for (int v = 0; v < b.ny(); ++v) w(row, y * b.ny() + v) = a(x1, x2, y) * b(u1, u2, v);
        }
  return BasicChannel<Scalar>(int(nx1), int(nx2), int(ny), std::move(w));
}

template <class Scalar>
BasicChannel<Scalar> tensor_power(const BasicChannel<Scalar>& w, int n) {
  if (n < 1) throw std::invalid_argument("tensor power needs n >= 1");
  BasicChannel<Scalar> out = w;
  for (int i = 1; i < n; ++i) out = tensor(out, w);
  return out;
}

/// Stable 64-bit fingerprint of the shape and double-rounded entries.
std::uint64_t channel_hash(const Channel& w);

/// Channel file: "nx1 N", "nx2 N", "ny N" lines, then "x1 x2 y value" entries; '#' starts a comment.
ExactChannel parse_channel(const std::string& text);
ExactChannel read_channel_file(const std::string& path);
std::string format_channel(const ExactChannel& w);
std::string format_channel(const Channel& w);

}  // namespace nsmac
