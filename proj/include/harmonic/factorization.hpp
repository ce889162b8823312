#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace harmonic {

/// p^exponent exactly divides some integer.
struct Valuation {
  std::uint64_t p = 0;
  std::uint32_t exponent = 0;

  friend bool operator==(const Valuation&, const Valuation&) = default;
};

/// Exponent vector (eps_p) over primes p <= n, stored sparsely: only primes
/// with eps_p >= 1 appear, sorted by p. Represents the integer prod p^eps_p.
class GeometricFactorization {
 public:
  GeometricFactorization() = default;
  explicit GeometricFactorization(std::uint64_t n) : n_(n) {}

  /// Appends p^exponent; primes must arrive in increasing order.
  void push(std::uint64_t p, std::uint32_t exponent);

  std::uint64_t n() const { return n_; }
  const std::vector<Valuation>& exponents() const { return exponents_; }
  std::uint32_t exponent_of(std::uint64_t p) const;
  double log_value() const { return log_value_; }

  /// prod p^eps_p when it does not exceed `bound`, else nullopt. Exact
  /// integer arithmetic with early exit, so it never overflows.
  std::optional<std::uint64_t> value_up_to(std::uint64_t bound) const;

  /// The conditioning event {prod p^eps_p <= n}.
  bool in_event() const { return value_up_to(n_).has_value(); }

 private:
  std::uint64_t n_ = 0;
  std::vector<Valuation> exponents_;
  double log_value_ = 0.0;
};

}  // namespace harmonic
