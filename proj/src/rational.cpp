#include "imbed/rational.hpp"

#include <cctype>

#include "imbed/error.hpp"

namespace imbed {

namespace {

boost::multiprecision::cpp_int parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw Error(ErrorCode::validation, "malformed rational '" + std::string(whole) + "'");
  boost::multiprecision::cpp_int value = 0;
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw Error(ErrorCode::validation, "malformed rational '" + std::string(whole) + "'");
    value = value * 10 + (c - '0');
  }
  return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  auto slash = body.find('/');
  auto num = parse_integer(body.substr(0, slash), text);
  boost::multiprecision::cpp_int den = 1;
  if (slash != std::string_view::npos) den = parse_integer(body.substr(slash + 1), text);
  if (den == 0) throw Error(ErrorCode::validation, "zero denominator in '" + std::string(text) + "'");
  Rational r(num, den);
  return negative ? Rational(-r) : r;
}

std::string format_rational(const Rational& value) {
  auto num = boost::multiprecision::numerator(value);
  auto den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace imbed
