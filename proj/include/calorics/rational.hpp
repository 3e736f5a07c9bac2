#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace calorics {

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "p", "-p" or "p/q" (q != 0). Throws InvalidArgument on malformed input.
Rational parse_rational(std::string_view text);

/// "p" when the denominator is 1, otherwise "p/q".
std::string to_string(const Rational& r);

/// Exact value of a finite double (every double is a dyadic rational).
Rational rational_from_double(double value);

Rational factorial(unsigned n);

}  // namespace calorics
