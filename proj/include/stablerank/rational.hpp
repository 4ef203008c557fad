#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "stablerank/errors.hpp"

// Under C++20 rewritten comparisons, boost's `int == rational<long>` template calls itself forever.
// An exact non-template overload wins overload resolution and breaks the cycle.
namespace boost {
inline bool operator==(const rational<std::int64_t>& a, std::int64_t b) {
  return a.denominator() == 1 && a.numerator() == b;
}
inline bool operator==(const rational<std::int64_t>& a, int b) { return a == static_cast<std::int64_t>(b); }
}  // namespace boost

namespace stablerank {

/// Exact rational, always normalized (gcd(num, den) = 1, den > 0).
using Rational = boost::rational<std::int64_t>;

/// A point of Q^r.
using RationalPoint = std::vector<Rational>;

inline std::int64_t floor_div(const Rational& q) {
  std::int64_t n = q.numerator(), d = q.denominator();
  std::int64_t f = n / d;
  if ((n % d != 0) && (n < 0)) --f;
  return f;
}

inline std::string to_string(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

inline std::string to_string(const RationalPoint& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += to_string(v[i]);
  }
  return out + ")";
}

/// Parses "p", "p/q" or "-p/q".
inline Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view s) -> std::int64_t {
    if (s.empty()) throw ParseError("empty integer in rational token '" + std::string(text) + "'");
    std::size_t i = 0;
    bool negative = false;
    if (s[0] == '-' || s[0] == '+') {
      negative = s[0] == '-';
      i = 1;
    }
    if (i == s.size()) throw ParseError("bad rational token '" + std::string(text) + "'");
    std::int64_t value = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw ParseError("bad rational token '" + std::string(text) + "'");
      value = value * 10 + (s[i] - '0');
    }
    return negative ? -value : value;
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  std::int64_t num = parse_int(text.substr(0, slash));
  std::int64_t den = parse_int(text.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

/// Comma separated list of rationals, e.g. "1,3/2".
inline RationalPoint parse_rational_list(std::string_view text) {
  RationalPoint out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    auto token = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.push_back(parse_rational(token));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline bool leq(const RationalPoint& a, const RationalPoint& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

/// Smallest k > 0 such that every q in values, multiplied by k, is an integer.
inline std::int64_t common_denominator(const std::vector<Rational>& values) {
  std::int64_t k = 1;
  for (const auto& q : values) k = std::lcm(k, q.denominator());
  return k;
}

}  // namespace stablerank
