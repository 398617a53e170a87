#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "gsq/error.hpp"

namespace gsq {

using Rational = boost::rational<std::int64_t>;

inline std::string to_string(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

inline double to_double(const Rational& q) {
  return boost::rational_cast<double>(q);
}

namespace detail {

inline std::int64_t parse_int(std::string_view s, std::string_view whole) {
  if (s.empty()) throw Error("rational", "empty integer in '" + std::string(whole) + "'");
  std::int64_t v = 0;
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw Error("rational", "malformed number '" + std::string(whole) + "'");
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9')
      throw Error("rational", "malformed number '" + std::string(whole) + "'");
    if (v > (INT64_MAX - 9) / 10) throw Error("rational", "number too large '" + std::string(whole) + "'");
    v = v * 10 + (s[i] - '0');
  }
  return neg ? -v : v;
}

}  // namespace detail

// Accepts "p/q", "p" or a decimal such as "0.125" (converted exactly).
inline Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = detail::parse_int(text.substr(0, slash), text);
    auto den = detail::parse_int(text.substr(slash + 1), text);
    if (den == 0) throw Error("rational", "zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string digits(text.substr(0, dot));
    auto frac = text.substr(dot + 1);
    if (frac.size() > 15) throw Error("rational", "too many decimal places in '" + std::string(text) + "'");
    digits += frac;
    if (digits.empty() || digits == "-" || digits == "+") digits += "0";
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    return Rational(detail::parse_int(digits, text), den);
  }
  return Rational(detail::parse_int(text, text));
}

}  // namespace gsq
