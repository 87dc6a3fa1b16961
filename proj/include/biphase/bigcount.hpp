#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

#include "biphase/logreal.hpp"

namespace biphase {

// Arbitrary-precision nonnegative integer; enumeration results are exact,
// never rounded.
using BigCount = mpz_class;

inline BigCount big_pow(unsigned long base, unsigned long exp) {
  BigCount r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

inline BigCount big_binomial(unsigned long n, unsigned long k) {
  if (k > n) return BigCount(0);
  BigCount r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

// (n)_i = n(n-1)...(n-i+1); (n)_0 = 1.
inline BigCount falling_factorial(unsigned long n, unsigned long i) {
  if (i > n) throw std::domain_error("falling_factorial: i > n");
  BigCount r(1);
  for (unsigned long t = 0; t < i; ++t) r *= (n - t);
  return r;
}

inline std::string to_decimal(const BigCount& v) { return v.get_str(10); }

inline LogReal to_logreal(const BigCount& v) {
  if (v == 0) return LogReal::zero();
  if (v < 0) throw std::domain_error("to_logreal: negative BigCount");
  long e2 = 0;
  double d = mpz_get_d_2exp(&e2, v.get_mpz_t());
  return LogReal::from_log(std::log(d) + static_cast<double>(e2) * M_LN2);
}

}  // namespace biphase
