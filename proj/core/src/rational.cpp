#include "bartree/rational.hpp"

#include <cctype>

#include "bartree/error.hpp"

namespace bartree {
namespace {

BigInt parse_integer(std::string_view text, std::string_view whole) {
  std::size_t i = 0;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) i = 1;
  if (i == text.size()) {
    throw Error(ErrorCode::InvalidInput,
                "malformed rational '" + std::string(whole) + "'");
  }
  for (std::size_t k = i; k < text.size(); ++k) {
    if (!std::isdigit(static_cast<unsigned char>(text[k]))) {
      throw Error(ErrorCode::InvalidInput,
                  "malformed rational '" + std::string(whole) + "'");
    }
  }
  BigInt value(std::string(text.substr(i)));
  return (!text.empty() && text[0] == '-') ? BigInt(-value) : value;
}

}  // namespace

std::string to_fraction_string(const Rational& value) {
  return boost::multiprecision::numerator(value).str() + "/" +
         boost::multiprecision::denominator(value).str();
}

Rational parse_rational(std::string_view text) {
  const std::size_t slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text, text));
  const BigInt num = parse_integer(text.substr(0, slash), text);
  const BigInt den = parse_integer(text.substr(slash + 1), text);
  if (den == 0) {
    throw Error(ErrorCode::InvalidInput,
                "zero denominator in '" + std::string(text) + "'");
  }
  return Rational(num, den);
}

}  // namespace bartree
