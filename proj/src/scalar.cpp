#include "nsmac/scalar.hpp"

#include <cctype>
#include <stdexcept>

namespace nsmac {

namespace {

BigInt pow10(long e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(e));
  return r;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw std::invalid_argument("empty number");

  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad fraction: " + text);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
    q.canonicalize();
    return q;
  }

  std::size_t i = 0;
  bool negative = false;
  if (s[i] == '+' || s[i] == '-') negative = s[i++] == '-';
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  for (; i < s.size() && s[i] != 'e' && s[i] != 'E'; ++i) {
    if (s[i] == '.') {
      if (seen_point) throw std::invalid_argument("bad number: " + text);
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      digits += s[i];
      if (seen_point) ++frac_digits;
    } else {
      throw std::invalid_argument("bad number: " + text);
    }
  }
  if (digits.empty()) throw std::invalid_argument("bad number: " + text);
  long exponent = 0;
  if (i < s.size()) {
    std::size_t used = 0;
    exponent = std::stol(s.substr(i + 1), &used);
    if (used != s.size() - i - 1) throw std::invalid_argument("bad exponent: " + text);
  }
  exponent -= frac_digits;
  Rational q{BigInt(digits, 10)};
  if (exponent > 0) q *= Rational(pow10(exponent));
  if (exponent < 0) q /= Rational(pow10(-exponent));
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

std::string format_rational(const Rational& q) { return q.get_str(); }

}  // namespace nsmac
