#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "nsem/signature.hpp"

namespace nsem {

using Rational = boost::multiprecision::cpp_rational;

/// Parses "3", "0.25", "-1.5" or "3/4" exactly. Throws Error otherwise.
Rational parse_rational(std::string_view text);

/// "3/4", or "1" for integers.
std::string format_rational(const Rational& r);

/// Decimal rendering rounded half-up to at most `digits` fractional digits,
/// with trailing zeros removed ("0.8", "0.333333333333").
std::string format_decimal(const Rational& r, int digits = 12);

}  // namespace nsem
