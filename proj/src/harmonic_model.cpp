#include "harmonic/harmonic_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "harmonic/errors.hpp"
#include "harmonic/summation.hpp"

namespace harmonic {

HarmonicLaw::HarmonicLaw(std::uint64_t n) : n_(n) {
  if (n == 0) throw DomainError("HarmonicLaw: n must be positive");
  if (n > 500'000'000) throw ResourceError("HarmonicLaw: n above 5e8 needs too much memory");
  cumulative_.resize(n);
  CompensatedSum sum;
  for (std::uint64_t k = 1; k <= n; ++k) {
    sum += 1.0 / static_cast<double>(k);
    cumulative_[k - 1] = sum.value();
  }
}

double HarmonicLaw::pmf(std::uint64_t k) const {
  if (k == 0 || k > n_) return 0.0;
  return 1.0 / (static_cast<double>(k) * normalizer());
}

double HarmonicLaw::cdf(std::uint64_t k) const {
  if (k == 0) return 0.0;
  if (k >= n_) return 1.0;
  return cumulative_[k - 1] / normalizer();
}

std::uint64_t HarmonicLaw::sample(RandomStream& stream) const {
  const double target = stream.uniform() * normalizer();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  const auto index = static_cast<std::uint64_t>(it - cumulative_.begin());
  return std::min(index + 1, n_);
}

std::uint64_t sample_harmonic(const HarmonicLaw& law, RandomStream& stream) {
  return law.sample(stream);
}

namespace {

// Number of failures before the first success, success probability q.
std::uint64_t geometric_skip(double q, RandomStream& stream) {
  if (q >= 1.0) return 0;
  const double skip = std::floor(std::log(stream.uniform_positive()) / std::log1p(-q));
  return skip >= 1e18 ? std::uint64_t{1} << 62 : static_cast<std::uint64_t>(skip);
}

// m >= 0 with P[m] = (1 - 1/p) p^{-m}.
std::uint32_t geometric_exponent(double p, RandomStream& stream) {
  const double m = std::floor(std::log(stream.uniform_positive()) / -std::log(p));
  return m >= 4e9 ? 4'000'000'000u : static_cast<std::uint32_t>(m);
}

}  // namespace

GeometricFactorization sample_geometric_vector(std::uint64_t n, const PrimeTable& table,
                                               RandomStream& stream) {
  if (table.limit() < n) throw DomainError("sample_geometric_vector: table limit below n");
  GeometricFactorization g(n);
  const auto primes = table.primes();
  const std::size_t count = table.count_up_to(n);
  std::size_t i = 0;
  while (i < count) {
    const double bound = 1.0 / primes[i];
    i += geometric_skip(bound, stream);
    if (i >= count) break;
    const double p = primes[i];
    if (stream.uniform() * p < 1.0 / bound) {
      g.push(primes[i], 1 + geometric_exponent(p, stream));
    }
    ++i;
  }
  return g;
}

ConditionedDraw sample_conditioned(std::uint64_t n, const PrimeTable& table, RandomStream& stream,
                                   std::size_t max_rejections) {
  if (n < 2) throw DomainError("sample_conditioned: n must be >= 2");
  for (std::size_t trial = 1; trial <= max_rejections; ++trial) {
    GeometricFactorization g = sample_geometric_vector(n, table, stream);
    if (g.in_event()) return {std::move(g), trial};
  }
  throw RetriableError("sample_conditioned: rejection budget of " + std::to_string(max_rejections) +
                       " exhausted at n = " + std::to_string(n));
}

double exact_pa(std::uint64_t n, const PrimeTable& table) {
  if (n < 2) throw DomainError("exact_pa: n must be >= 2");
  if (table.limit() < n) throw DomainError("exact_pa: table limit below n");
  CompensatedSum harmonic_sum;
  for (std::uint64_t k = 1; k <= n; ++k) harmonic_sum += 1.0 / static_cast<double>(k);
  CompensatedSum log_product;
  for (Prime p : table.primes().first(table.count_up_to(n))) log_product += std::log1p(-1.0 / p);
  return harmonic_sum.value() * std::exp(log_product.value());
}

EnumeratedLaw enumerate_conditional_law(std::uint64_t n, const PrimeTable& table) {
  if (n < 1) throw DomainError("enumerate_conditional_law: n must be positive");
  if (n > 1'000'000) throw ResourceError("enumerate_conditional_law: n above 1e6");
  if (table.limit() < n) throw DomainError("enumerate_conditional_law: table limit below n");
  const auto primes = table.primes().first(table.count_up_to(n));

  // Mass of eps = 0 for every prime; each nonzero exponent multiplies by p^{-m}.
  double base = 1.0;
  for (Prime p : primes) base *= 1.0 - 1.0 / p;

  std::vector<double> mass(n, 0.0);
  // Depth-first walk over (next prime index, product so far, p^{-eps} weight).
  struct Frame {
    std::size_t index;
    std::uint64_t product;
    double weight;
  };
  std::vector<Frame> stack{{0, 1, base}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    mass[f.product - 1] += f.weight;
    for (std::size_t j = f.index; j < primes.size(); ++j) {
      const std::uint64_t p = primes[j];
      if (f.product > n / p) break;
      std::uint64_t product = f.product * p;
      double weight = f.weight / static_cast<double>(p);
      while (true) {
        stack.push_back({j + 1, product, weight});
        if (product > n / p) break;
        product *= p;
        weight /= static_cast<double>(p);
      }
    }
  }

  EnumeratedLaw out;
  CompensatedSum total;
  for (double m : mass) total += m;
  out.event_probability = total.value();
  out.conditional_pmf.resize(n);
  for (std::uint64_t k = 0; k < n; ++k) out.conditional_pmf[k] = mass[k] / out.event_probability;
  return out;
}

}  // namespace harmonic
