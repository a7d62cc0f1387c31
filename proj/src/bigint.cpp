#include "neretin/bigint.hpp"

#include <cmath>

#include "neretin/error.hpp"

namespace neretin {

Integer factorial(std::uint64_t n) {
  Integer out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

Integer power(const Integer& base, std::uint64_t exponent) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

double log_integer(const Integer& value) {
  if (sgn(value) <= 0) throw PreconditionError("log_integer: value must be positive");
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, value.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exponent) * std::log(2.0);
}

Rational exact_rational(double value) {
  if (!std::isfinite(value)) throw ValidationError("exact_rational: non-finite value");
  Rational out(value);
  out.canonicalize();
  return out;
}

std::string to_string(const Integer& value) { return value.get_str(); }

std::string to_string(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

}  // namespace neretin
