#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "harmonic/factorization.hpp"
#include "harmonic/primes.hpp"
#include "harmonic/random.hpp"

namespace harmonic {

/// The harmonic law on {1, ..., n}: P[H_n = k] = 1 / (k L_n).
class HarmonicLaw {
 public:
  explicit HarmonicLaw(std::uint64_t n);

  std::uint64_t n() const { return n_; }
  /// L_n = sum_{k<=n} 1/k.
  double normalizer() const { return cumulative_.back(); }
  double pmf(std::uint64_t k) const;
  /// P[H_n <= k].
  double cdf(std::uint64_t k) const;

  /// Inverse-CDF draw, O(log n).
  std::uint64_t sample(RandomStream& stream) const;

 private:
  std::uint64_t n_;
  std::vector<double> cumulative_;  // cumulative_[k-1] = sum_{j<=k} 1/j
};

/// Same as law.sample(stream).
std::uint64_t sample_harmonic(const HarmonicLaw& law, RandomStream& stream);

/// Independent eps_p ~ Geometric, P[eps_p = m] = (1 - 1/p) p^{-m}, p <= n.
///
/// Only the primes with eps_p >= 1 are visited: since P[eps_p >= 1] = 1/p is
/// decreasing in p, the next candidate index is drawn by a geometric skip at
/// the current bound and accepted with probability (1/p)/bound. Given
/// eps_p >= 1, eps_p - 1 is again Geometric with the same parameter.
GeometricFactorization sample_geometric_vector(std::uint64_t n, const PrimeTable& table,
                                               RandomStream& stream);

struct ConditionedDraw {
  GeometricFactorization factorization;
  std::size_t trials = 0;
};

inline constexpr std::size_t kDefaultMaxRejections = 1000;

/// Rejection sampling of the geometric vector on {prod p^eps_p <= n}.
/// The accepted product is distributed as H_n.
ConditionedDraw sample_conditioned(std::uint64_t n, const PrimeTable& table, RandomStream& stream,
                                   std::size_t max_rejections = kDefaultMaxRejections);

/// Exact P[prod p^eps_p <= n] = L_n prod_{p<=n} (1 - 1/p).
double exact_pa(std::uint64_t n, const PrimeTable& table);

/// Exhaustive oracle for small n: walks every exponent vector with
/// prod p^eps_p <= n, weights it by the product of geometric pmfs and
/// returns the conditional law of the product on {1..n} (index k-1) together
/// with the unconditional mass of the event.
struct EnumeratedLaw {
  std::vector<double> conditional_pmf;
  double event_probability = 0.0;
};
EnumeratedLaw enumerate_conditional_law(std::uint64_t n, const PrimeTable& table);

}  // namespace harmonic
