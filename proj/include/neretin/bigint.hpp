#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace neretin {

using Integer = mpz_class;
using Rational = mpq_class;

Integer factorial(std::uint64_t n);
Integer power(const Integer& base, std::uint64_t exponent);

/// Natural logarithm of a positive integer, accurate far beyond double range.
double log_integer(const Integer& value);

/// Exact rational from a double (every finite double is a dyadic rational).
Rational exact_rational(double value);

std::string to_string(const Integer& value);
std::string to_string(const Rational& value);

}  // namespace neretin
