#pragma once

#include <cmath>
#include <string>

#include <Eigen/Core>
#include <gmpxx.h>

namespace nsmac {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Scalar-dependent helpers shared by the templated numerics.
template <class Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static double from_ratio(long num, long den) { return double(num) / double(den); }
  static double from_big(const BigInt& z) { return z.get_d(); }
  static double to_double(double x) { return x; }
  static bool is_zero(double x, double tol) { return std::abs(x) <= tol; }
  static double abs(double x) { return std::abs(x); }
  static int sign(double x) { return (x > 0) - (x < 0); }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static Rational from_ratio(long num, long den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  static Rational from_big(const BigInt& z) { return Rational(z); }
  static double to_double(const Rational& x) { return x.get_d(); }
  static bool is_zero(const Rational& x, double) { return sgn(x) == 0; }
  static Rational abs(const Rational& x) { return ::abs(x); }
  static int sign(const Rational& x) { return sgn(x); }
};

template <class Scalar>
double to_double(const Scalar& x) {
  return ScalarTraits<Scalar>::to_double(x);
}

/// Parses "p/q", integers, decimals and scientific notation exactly.
Rational parse_rational(const std::string& text);

std::string format_rational(const Rational& q);

}  // namespace nsmac

namespace Eigen {

template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  typedef mpq_class Real;
  typedef mpq_class NonInteger;
  typedef mpq_class Literal;
  typedef mpq_class Nested;
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100
  };
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
};

namespace internal {
template <>
struct cast_impl<mpq_class, double> {
  static inline double run(const mpq_class& x) { return x.get_d(); }
};
}  // namespace internal

}  // namespace Eigen
