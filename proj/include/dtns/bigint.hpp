/**
 * @file bigint.hpp
 * @brief Exact integer and rational types used throughout dtns.
 */
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>
#include <string_view>

#include "dtns/error.hpp"

namespace dtns {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses an optionally signed decimal integer of any length.
inline BigInt parse_bigint(std::string_view text) {
  std::size_t pos = 0;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) pos = 1;
  if (pos == text.size()) throw Error(ErrorCode::SyntaxError, "empty integer '" + std::string(text) + "'");
  for (std::size_t i = pos; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw Error(ErrorCode::SyntaxError, "not a decimal integer: '" + std::string(text) + "'");
    }
  }
  BigInt value(std::string(text.substr(pos)));
  return text[0] == '-' ? BigInt(-value) : value;
}

inline std::string to_string(const BigInt& value) { return value.str(); }

inline std::string to_string(const Rational& value) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (denominator(value) == 1) return numerator(value).str();
  return numerator(value).str() + "/" + denominator(value).str();
}

}  // namespace dtns
