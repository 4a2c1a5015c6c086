#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace bartree {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Always "num/den", also for integers ("3/1"); the sign sits on the numerator.
std::string to_fraction_string(const Rational& value);

// Accepts "num/den" or a bare integer. Throws Error(InvalidInput) otherwise.
Rational parse_rational(std::string_view text);

}  // namespace bartree
