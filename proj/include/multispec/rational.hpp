#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace multispec {

// Arbitrary-precision rational, always kept in canonical (reduced) form.
using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "a/b", "a", or a plain decimal such as "0.25" or "-1.5e-3" exactly.
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Serializes as "num/den", including "1/1" for integers.
std::string to_fraction_string(const Rational& q);

/// Decimal with 12 significant digits, trailing zeros kept ("0.500000000000").
std::string to_decimal_string(const Rational& q);

double to_double(const Rational& q);

/// Natural log of a positive rational; stable for numerators far outside
/// double range.
double log_of(const Rational& q);

Rational pow(const Rational& base, unsigned exponent);

}  // namespace multispec
