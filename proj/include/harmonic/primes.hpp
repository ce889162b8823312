#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

namespace harmonic {

using Prime = std::uint32_t;

/// Largest sieve limit accepted by sieve().
inline constexpr std::uint64_t kMaxSieveLimit = 1'000'000'000;

/// All primes up to `limit`, in increasing order. Immutable and cheap to
/// copy (the prime vector is shared).
class PrimeTable {
 public:
  PrimeTable(std::uint64_t limit, std::vector<Prime> primes);

  std::uint64_t limit() const { return limit_; }
  std::span<const Prime> primes() const { return *primes_; }
  std::size_t size() const { return primes_->size(); }
  bool empty() const { return primes_->empty(); }
  Prime operator[](std::size_t i) const { return (*primes_)[i]; }

  /// Number of primes <= x (x may exceed limit(); the count is then capped).
  std::size_t count_up_to(std::uint64_t x) const;

  /// Membership test; only meaningful for p <= limit().
  bool contains(std::uint64_t p) const;

  /// Binary cache: "PTBL1", u64 limit, u64 count, then count u64 primes,
  /// all little-endian.
  void save(const std::filesystem::path& path) const;
  static PrimeTable load(const std::filesystem::path& path);

 private:
  std::uint64_t limit_;
  std::shared_ptr<const std::vector<Prime>> primes_;
};

/// Segmented sieve of Eratosthenes. Throws DomainError for limit < 2 and
/// ResourceError above kMaxSieveLimit.
PrimeTable sieve(std::uint64_t limit);

/// Reuses the cache at `cache` when it covers `limit`, otherwise sieves and
/// writes it. An empty path disables caching.
PrimeTable sieve_cached(std::uint64_t limit, const std::filesystem::path& cache);

/// Restriction of a table to primes <= limit.
PrimeTable truncate(const PrimeTable& table, std::uint64_t limit);

/// Slow reference: trial division.
bool is_prime_trial_division(std::uint64_t k);

struct MertensSums {
  std::uint64_t n = 0;
  double log_weighted_sum = 0.0;     // sum_{p<=n} log p / p
  double reciprocal_sum = 0.0;       // sum_{p<=n} 1/p
  double deviation1 = 0.0;           // |log_weighted_sum - log n|
  double deviation2_centered = 0.0;  // reciprocal_sum - log log n

  /// deviation1 * log n / 2; values above 1 violate the 2/log n form.
  double bound_ratio() const;
};

/// Prime sums over p <= n (n defaults to the table limit, must not exceed it).
MertensSums mertens_sums(const PrimeTable& table);
MertensSums mertens_sums(const PrimeTable& table, std::uint64_t n);

struct MertensConstantEstimate {
  double estimate = 0.0;  // deviation2_centered at the largest n
  double spread = 0.0;    // max - min of deviation2_centered over inputs
  std::uint64_t n = 0;
};

/// Needs at least two entries and a largest n >= 1e5.
MertensConstantEstimate estimate_mertens_constant(std::span<const MertensSums> sums);

}  // namespace harmonic
