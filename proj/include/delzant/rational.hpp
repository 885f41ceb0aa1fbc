#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "delzant/errors.hpp"

namespace delzant {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

/// Parses "p", "p/q", or a finite decimal such as "-1.25".
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw InvalidInput("empty rational literal");

  auto valid_int = [](std::string_view v) {
    if (v.empty()) return false;
    std::size_t i = (v[0] == '-' || v[0] == '+') ? 1 : 0;
    if (i == v.size()) return false;
    for (; i < v.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(v[i]))) return false;
    return true;
  };
  // BigInt reads a leading 0 as an octal prefix, so normalise to plain decimal
  auto decimal = [](std::string v) {
    bool negative = !v.empty() && v[0] == '-';
    if (!v.empty() && (v[0] == '-' || v[0] == '+')) v = v.substr(1);
    std::size_t nz = v.find_first_not_of('0');
    v = nz == std::string::npos ? "0" : v.substr(nz);
    return BigInt((negative ? "-" : "") + v);
  };

  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    std::string digits = whole;
    if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) digits = digits.substr(1);
    if (digits.empty()) digits = "0";
    if (!valid_int(digits) || (!frac.empty() && !valid_int(frac)) || frac.find_first_of("+-") != std::string::npos)
      throw InvalidInput("malformed decimal literal: " + s);
    BigInt num = decimal(digits + frac);
    BigInt den(1);
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    Rational r(num, den);
    return negative ? Rational(-r) : r;
  }
  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
      throw InvalidInput("malformed rational literal: " + s);
    BigInt d = decimal(den);
    if (d == 0) throw InvalidInput("zero denominator: " + s);
    return Rational(decimal(num), d);
  }
  if (!valid_int(s)) throw InvalidInput("malformed rational literal: " + s);
  return Rational(decimal(s));
}

/// Canonical "p/q" (or "p" when integral) rendering.
inline std::string format_rational(const Rational& r) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline int sign(const Rational& r) { return r.sign(); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline BigInt floor_rational(const Rational& r) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  BigInt q, rem;
  boost::multiprecision::divide_qr(numerator(r), denominator(r), q, rem);
  if (rem < 0) q -= 1;
  return q;
}

/// Closed rational interval [lo, hi].
struct Interval {
  Rational lo;
  Rational hi;

  bool contains_zero() const { return lo <= 0 && hi >= 0; }
  /// +1 / -1 when the interval excludes zero, 0 otherwise.
  int certified_sign() const {
    if (lo > 0) return 1;
    if (hi < 0) return -1;
    return 0;
  }
  Rational width() const { return hi - lo; }
  Rational midpoint() const { return (lo + hi) / 2; }
};

inline Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
inline Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }
inline Interval operator-(const Interval& a, const Interval& b) { return a + (-b); }
inline Interval operator*(const Rational& c, const Interval& a) {
  if (c >= 0) return {c * a.lo, c * a.hi};
  return {c * a.hi, c * a.lo};
}
inline Interval operator*(const Interval& a, const Interval& b) {
  Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  Interval out{p[0], p[0]};
  for (const auto& v : p) {
    if (v < out.lo) out.lo = v;
    if (v > out.hi) out.hi = v;
  }
  return out;
}

/// Outward-rounded double enclosure of a rational interval.
struct DoubleInterval {
  double lo;
  double hi;
};

inline DoubleInterval to_double_interval(const Interval& iv) {
  double lo = to_double(iv.lo);
  double hi = to_double(iv.hi);
  constexpr double rel = 1e-12;
  lo -= std::abs(lo) * rel + 1e-300;
  hi += std::abs(hi) * rel + 1e-300;
  return {lo, hi};
}

}  // namespace delzant
