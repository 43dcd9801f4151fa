#pragma once

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

namespace cnflab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exact C(n, k); zero when k > n.
inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n)
    return 0;
  if (k > n - k)
    k = n - k;
  BigInt result = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    result *= n - i;
    result /= i + 1;
  }
  return result;
}

// Largest integer not above a non-negative rational.
inline BigInt floor_of(const Rational& r) {
  return boost::multiprecision::numerator(r) / boost::multiprecision::denominator(r);
}

} // namespace cnflab
