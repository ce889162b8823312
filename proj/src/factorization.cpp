#include "harmonic/factorization.hpp"

#include <cmath>

#include "harmonic/errors.hpp"

namespace harmonic {

void GeometricFactorization::push(std::uint64_t p, std::uint32_t exponent) {
  if (exponent == 0) return;
  if (!exponents_.empty() && exponents_.back().p >= p) {
    throw DomainError("GeometricFactorization: primes must be pushed in increasing order");
  }
  exponents_.push_back({p, exponent});
  log_value_ += exponent * std::log(static_cast<double>(p));
}

std::uint32_t GeometricFactorization::exponent_of(std::uint64_t p) const {
  for (const auto& v : exponents_) {
    if (v.p == p) return v.exponent;
    if (v.p > p) break;
  }
  return 0;
}

std::optional<std::uint64_t> GeometricFactorization::value_up_to(std::uint64_t bound) const {
  std::uint64_t product = 1;
  for (const auto& v : exponents_) {
    for (std::uint32_t e = 0; e < v.exponent; ++e) {
      if (product > bound / v.p) return std::nullopt;
      product *= v.p;
    }
  }
  return product;
}

}  // namespace harmonic
