#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace imbed {

using Rational = boost::multiprecision::cpp_rational;

/// Parses "p", "p/q" or "-p/q". Throws Error(validation) on malformed text or q == 0.
Rational parse_rational(std::string_view text);

/// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string format_rational(const Rational& value);

}  // namespace imbed
