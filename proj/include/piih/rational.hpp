#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "piih/error.hpp"

namespace piih {

using BigInt = boost::multiprecision::cpp_int;
/// Exact rational, always in lowest terms with positive denominator.
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return denominator_of(r) == 1; }

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  if (den == 0) throw DomainError("rational with zero denominator");
  return Rational(BigInt(num)) / Rational(BigInt(den));  // boost rejects a negative denominator
}

inline BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

/// Generalized binomial coefficient binom(r, j) for rational r.
inline Rational binomial(const Rational& r, unsigned j) {
  Rational out = 1;
  for (unsigned i = 0; i < j; ++i) out = out * (r - i) / (i + 1);
  return out;
}

inline Rational pow(const Rational& base, int e) {
  if (e < 0) {
    if (base == 0) throw DomainError("zero to a negative power");
    return pow(Rational(1) / base, -e);
  }
  Rational out = 1, b = base;
  unsigned u = static_cast<unsigned>(e);
  while (u) {
    if (u & 1u) out *= b;
    b *= b;
    u >>= 1;
  }
  return out;
}

/// Exact b-th root of a non-negative integer, if it exists.
inline std::optional<BigInt> exact_root(const BigInt& x, unsigned b) {
  if (x < 0) return std::nullopt;
  if (x < 2 || b == 1) return x;
  // Bisection on [0, 2^(bits/b + 1)].
  std::size_t bits = boost::multiprecision::msb(x) + 1;
  BigInt lo = 0, hi = BigInt(1) << (bits / b + 1);
  while (lo < hi) {
    BigInt mid = (lo + hi + 1) / 2;
    if (boost::multiprecision::pow(mid, b) <= x)
      lo = mid;
    else
      hi = mid - 1;
  }
  if (boost::multiprecision::pow(lo, b) == x) return lo;
  return std::nullopt;
}

/// Exact r^(1/b) for rational r >= 0, if rational.
inline std::optional<Rational> exact_root(const Rational& r, unsigned b) {
  if (r < 0) return std::nullopt;
  auto num = exact_root(numerator_of(r), b);
  auto den = exact_root(denominator_of(r), b);
  if (!num || !den) return std::nullopt;
  return Rational(*num, *den);
}

inline std::string to_string(const Rational& r) {
  if (is_integer(r)) return numerator_of(r).str();
  return numerator_of(r).str() + "/" + denominator_of(r).str();
}

/// Parses "a", "a/b", or a plain decimal literal ("-0.25", "1e-3") exactly.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string& t) {
    while (!t.empty() && (t.front() == ' ' || t.front() == '\t')) t.erase(t.begin());
    while (!t.empty() && (t.back() == ' ' || t.back() == '\t')) t.pop_back();
  };
  trim(s);
  if (s.empty()) throw DomainError("empty rational literal");
  auto parse_int = [&](const std::string& t) -> BigInt {
    if (t.empty()) throw DomainError("bad rational literal '" + s + "'");
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) throw DomainError("bad rational literal '" + s + "'");
    for (std::size_t k = i; k < t.size(); ++k)
      if (t[k] < '0' || t[k] > '9') throw DomainError("bad rational literal '" + s + "'");
    std::string body = t.substr(i);
    body.erase(0, std::min(body.find_first_not_of('0'), body.size() - 1));  // no octal reading
    BigInt v(body);
    return t[0] == '-' ? BigInt(-v) : v;
  };
  if (auto slash = s.find('/'); slash != std::string::npos) {
    BigInt num = parse_int(s.substr(0, slash));
    BigInt den = parse_int(s.substr(slash + 1));
    if (den == 0) throw DomainError("rational with zero denominator");
    return Rational(num) / Rational(den);
  }
  // decimal with optional exponent
  std::string mant = s;
  int exp10 = 0;
  if (auto e = s.find_first_of("eE"); e != std::string::npos) {
    mant = s.substr(0, e);
    exp10 = static_cast<int>(parse_int(s.substr(e + 1)));
  }
  bool neg = !mant.empty() && mant[0] == '-';
  if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) mant.erase(mant.begin());
  std::string digits;
  if (auto dot = mant.find('.'); dot != std::string::npos) {
    digits = mant.substr(0, dot) + mant.substr(dot + 1);
    exp10 -= static_cast<int>(mant.size() - dot - 1);
  } else {
    digits = mant;
  }
  if (digits.empty()) throw DomainError("bad rational literal '" + s + "'");
  Rational v(parse_int(digits));
  v *= pow(Rational(10), exp10);
  return neg ? Rational(-v) : v;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace piih
