#pragma once

#include <cstdint>
#include <vector>

#include "harmonic/factorization.hpp"
#include "harmonic/primes.hpp"
#include "harmonic/random.hpp"

namespace harmonic {

inline constexpr std::uint32_t kDefaultLevelCap = 64;

/// Intensity nu(p, k) = 1 / (k p^k) of the point process on (prime, level).
double level_intensity(double p, std::uint32_t k);

/// sum_{k <= k_cap} nu(p, k); equals -log(1 - 1/p) as k_cap -> infinity.
double total_intensity(double p, std::uint32_t k_cap);

/// One realisation of the Poisson counts N(p, k), p <= n, 1 <= k <= k_cap.
/// Only nonzero counts are stored, sorted by (p, k).
struct PoissonizedExponents {
  struct Cell {
    std::uint64_t p = 0;
    std::uint32_t level = 0;
    std::uint32_t count = 0;
  };

  std::uint64_t n = 0;
  std::uint32_t k_cap = 0;
  std::vector<Cell> cells;
  /// sum_{p<=n} sum_{k>k_cap} nu(p, k): bounds the probability that
  /// truncation changes any reconstructed exponent.
  double truncation_bound = 0.0;

  std::uint32_t count(std::uint64_t p, std::uint32_t level) const;
};

/// sum_{p<=n} sum_{k>k_cap} 1/(k p^k).
double truncation_bound(std::uint64_t n, std::uint32_t k_cap, const PrimeTable& table);

/// Independent Poisson(nu(p,k)) counts. Sampled per prime: the number of
/// points at p is Poisson(total_intensity(p)), nonzero with probability
/// 1 - exp(-total) which decreases in p, so primes are skip-sampled as in
/// sample_geometric_vector; levels are then drawn from the normalised
/// (truncated) log-series law.
PoissonizedExponents sample_poissonized(std::uint64_t n, std::uint32_t k_cap,
                                        const PrimeTable& table, RandomStream& stream);

/// eps_p = sum_k k N(p, k).
GeometricFactorization reconstruct_epsilon(const PoissonizedExponents& pe);

/// N[g] = sum over cells of count * g(p, k).
template <class G>
double poisson_integral(const PoissonizedExponents& pe, G&& g) {
  double total = 0.0;
  for (const auto& c : pe.cells) total += c.count * g(c.p, c.level);
  return total;
}

/// Exact law of sum_{k<=k_cap} k N(p, k) on {0, ..., max_value} by
/// convolving the laws of k N(p, k) level by level.
std::vector<double> compound_poisson_pmf(double p, std::uint32_t k_cap, std::uint32_t max_value);

}  // namespace harmonic
