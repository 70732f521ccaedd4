#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace foulkes {

using BigInt = mpz_class;

inline std::string to_decimal(const BigInt& x) { return x.get_str(10); }

inline BigInt parse_bigint(std::string_view text)
{
  BigInt out;
  if (text.empty() || out.set_str(std::string(text), 10) != 0)
    throw std::invalid_argument("not a decimal integer: '" + std::string(text) + "'");
  return out;
}

inline BigInt factorial(int n)
{
  BigInt out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
  return out;
}

inline BigInt binomial(long n, long k)
{
  if (k < 0 || n < 0 || k > n) return 0;
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

} // namespace foulkes
