#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "harmonic/errors.hpp"
#include "harmonic/harmonic_model.hpp"
#include "harmonic/primes.hpp"
#include "harmonic/random.hpp"
#include "harmonic/stats.hpp"
#include "oracles.hpp"

using namespace harmonic;

namespace {

const double kEg = std::exp(-std::numbers::egamma);

const PrimeTable& table_1e6() {
  static const PrimeTable t = sieve(1'000'000);
  return t;
}

double binomial_se(double p, double m) { return std::sqrt(p * (1 - p) / m); }

}  // namespace

TEST(HarmonicLaw, PmfAndNormalizer) {
  for (std::uint64_t n : {1u, 3u, 30u, 100000u}) {
    const HarmonicLaw law(n);
    long double direct = 0;
    for (std::uint64_t k = n; k >= 1; --k) direct += 1.0L / k;
    EXPECT_NEAR(law.normalizer(), static_cast<double>(direct), 1e-12 * static_cast<double>(direct));
    long double total = 0;
    for (std::uint64_t k = 1; k <= n; ++k) total += law.pmf(k);
    EXPECT_NEAR(static_cast<double>(total), 1.0, 1e-12);
    EXPECT_EQ(law.pmf(0), 0.0);
    EXPECT_EQ(law.pmf(n + 1), 0.0);
    EXPECT_NEAR(law.cdf(n), 1.0, 1e-15);
  }
  const HarmonicLaw three(3);
  EXPECT_NEAR(three.pmf(1), 6.0 / 11, 1e-15);
  EXPECT_NEAR(three.pmf(2), 3.0 / 11, 1e-15);
  EXPECT_NEAR(three.pmf(3), 2.0 / 11, 1e-15);
  EXPECT_THROW(HarmonicLaw(0), DomainError);
}

TEST(SampleHarmonic, Degenerate) {
  const HarmonicLaw law(1);
  RandomStream s(1, 0);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_harmonic(law, s), 1u);
}

TEST(SampleHarmonic, ThreeAtoms) {
  const HarmonicLaw law(3);
  RandomStream s(2, 0);
  const int m = 1'000'000;
  std::array<int, 3> hits{};
  for (int i = 0; i < m; ++i) ++hits.at(sample_harmonic(law, s) - 1);
  const double probs[3] = {6.0 / 11, 3.0 / 11, 2.0 / 11};
  for (int k = 0; k < 3; ++k)
    EXPECT_NEAR(hits[k] / double(m), probs[k], 3 * binomial_se(probs[k], m)) << k + 1;
}

TEST(SampleHarmonic, ChiSquareOn30) {
  const HarmonicLaw law(30);
  RandomStream s(3, 0);
  std::vector<std::uint64_t> counts(30);
  for (int i = 0; i < 1'000'000; ++i) ++counts[sample_harmonic(law, s) - 1];
  std::vector<double> probs(30);
  for (std::uint64_t k = 1; k <= 30; ++k) probs[k - 1] = 1.0 / (k * law.normalizer());
  const auto result = chi_square_test(counts, probs);
  EXPECT_EQ(result.degrees_of_freedom, 29u);
  EXPECT_GT(result.p_value, 0.001);
}

TEST(SampleHarmonic, MeanLogRatio) {
  const std::uint64_t n = 1'000'000;
  const HarmonicLaw law(n);
  long double ln_sum = 0, l_n = 0;
  for (std::uint64_t k = n; k >= 1; --k) {
    ln_sum += std::log(static_cast<long double>(k)) / k;
    l_n += 1.0L / k;
  }
  const double exact = static_cast<double>(ln_sum / l_n) / std::log(double(n));
  RandomStream s(4, 0);
  RunningMoments acc;
  for (int i = 0; i < 1'000'000; ++i) acc.add(std::log(double(sample_harmonic(law, s))) / std::log(double(n)));
  EXPECT_NEAR(acc.mean(), exact, 3 * acc.stderr_of_mean());
}

TEST(GeometricVector, Marginals) {
  const auto t = sieve(100);
  RandomStream s(5, 0);
  const int m = 1'000'000;
  int eps2_zero = 0, eps3_ge2 = 0;
  RunningMoments nonzero;
  for (int i = 0; i < m; ++i) {
    const auto g = sample_geometric_vector(100, t, s);
    eps2_zero += g.exponent_of(2) == 0;
    eps3_ge2 += g.exponent_of(3) >= 2;
    nonzero.add(double(g.exponents().size()));
    for (const auto& v : g.exponents()) ASSERT_LE(v.p, 100u);
  }
  EXPECT_NEAR(eps2_zero / double(m), 0.5, 3 * binomial_se(0.5, m));
  EXPECT_NEAR(eps3_ge2 / double(m), 1.0 / 9, 3 * binomial_se(1.0 / 9, m));
  double reciprocal = 0;
  for (auto p : oracle::primes_up_to(100)) reciprocal += 1.0 / p;
  EXPECT_NEAR(reciprocal, 1.8029, 1e-4);
  EXPECT_NEAR(nonzero.mean(), reciprocal, 3 * nonzero.stderr_of_mean());
}

TEST(GeometricVector, LargePrimesVisited) {
  // P[eps_p >= 1 for some p in (5e5, 1e6]] = 1 - prod (1 - 1/p), about 0.05.
  const auto& t = table_1e6();
  double none = 1.0;
  for (auto p : t.primes())
    if (p > 500000) none *= 1.0 - 1.0 / p;
  RandomStream s(6, 0);
  const int m = 200000;
  int hits = 0;
  for (int i = 0; i < m; ++i) {
    const auto g = sample_geometric_vector(1'000'000, t, s);
    hits += !g.exponents().empty() && g.exponents().back().p > 500000;
  }
  EXPECT_NEAR(hits / double(m), 1 - none, 3 * binomial_se(1 - none, m));
}

TEST(Conditioned, TwoAtoms) {
  const auto t = sieve(10);
  RandomStream s(7, 0);
  const int m = 300000;
  int ones = 0;
  for (int i = 0; i < m; ++i) {
    const auto value = sample_conditioned(2, t, s).factorization.value_up_to(2);
    ASSERT_TRUE(value.has_value());
    ones += *value == 1;
  }
  EXPECT_NEAR(ones / double(m), 2.0 / 3, 3 * binomial_se(2.0 / 3, m));
}

TEST(Conditioned, HarmonicAt30) {
  const auto t = sieve(30);
  const HarmonicLaw law(30);
  RandomStream s(8, 0);
  std::vector<double> values;
  for (int i = 0; i < 1'000'000; ++i)
    values.push_back(double(*sample_conditioned(30, t, s).factorization.value_up_to(30)));
  std::vector<double> atoms(30), cdf(30);
  for (std::uint64_t k = 1; k <= 30; ++k) {
    atoms[k - 1] = double(k);
    cdf[k - 1] = law.cdf(k);
  }
  EXPECT_LE(ks_statistic_discrete(EmpiricalDistribution(values), atoms, cdf), 0.01);
}

TEST(Conditioned, AcceptanceMatchesExactPa) {
  const auto t = sieve(1000);
  RandomStream s(9, 0);
  std::size_t trials = 0, accepted = 0;
  while (trials < 100000) {
    trials += sample_conditioned(1000, t, s).trials;
    ++accepted;
  }
  const double pa = exact_pa(1000, t);
  EXPECT_NEAR(accepted / double(trials), pa, 3 * binomial_se(pa, double(trials)));
}

// At n = 1e6 the acceptance rate is P[A_n] = 0.5849..., still 0.023 above
// its limit e^{-gamma}; compare with the exact value.
TEST(Conditioned, AcceptanceAtMillion) {
  const auto& t = table_1e6();
  RandomStream s(10, 0);
  std::size_t trials = 0, accepted = 0;
  while (accepted < 20000) {
    trials += sample_conditioned(1'000'000, t, s).trials;
    ++accepted;
  }
  const double pa = exact_pa(1'000'000, t);
  EXPECT_NEAR(pa, kEg * (1 + std::numbers::egamma / std::log(1e6)), 2e-3);
  EXPECT_NEAR(accepted / double(trials), pa, 3 * binomial_se(pa, double(trials)));
}

TEST(Conditioned, Errors) {
  const auto t = sieve(100);
  RandomStream s(11, 0);
  EXPECT_THROW(sample_conditioned(1, t, s), DomainError);
  EXPECT_THROW(sample_conditioned(50, t, s, 0), RetriableError);
  EXPECT_THROW(sample_geometric_vector(1000, t, s), DomainError);
}

TEST(ExactPa, Values) {
  const auto t = sieve(10'000'000);
  EXPECT_NEAR(exact_pa(2, t), 0.75, 1e-12);
  EXPECT_NEAR(exact_pa(21, t), 0.6235, 1e-4);
  EXPECT_GE(exact_pa(21, t), 0.5);
  const double big = exact_pa(10'000'000, t);
  EXPECT_LE(std::abs(big - kEg), 5 / std::log(1e7));
  // Second-order Mertens: L_n prod(1 - 1/p) = e^{-gamma} (1 + gamma / log n) + o(1 / log n).
  EXPECT_NEAR(big, kEg * (1 + std::numbers::egamma / std::log(1e7)), 1e-3);
  EXPECT_THROW(exact_pa(1, t), DomainError);
}

// L_n grows between primes while the product is fixed, so P[A_n] is not
// monotone step by step; it decreases along decades.
TEST(ExactPa, DecreasingAlongDecades) {
  const auto t = sieve(10'000'000);
  double last = exact_pa(2, t);
  for (std::uint64_t n = 10; n <= 10'000'000; n *= 10) {
    const double v = exact_pa(n, t);
    EXPECT_LT(v, last) << n;
    EXPECT_GT(v, kEg);
    last = v;
  }
  EXPECT_GT(exact_pa(12, t), exact_pa(11, t));
}

TEST(Enumeration, RepresentationIdentityUpTo50) {
  const auto t = sieve(50);
  for (std::uint64_t n = 1; n <= 50; ++n) {
    const auto law = enumerate_conditional_law(n, t);
    ASSERT_EQ(law.conditional_pmf.size(), n);
    const HarmonicLaw h(n);
    for (std::uint64_t k = 1; k <= n; ++k)
      EXPECT_NEAR(law.conditional_pmf[k - 1], h.pmf(k), 1e-12) << n << " " << k;
    if (n >= 2) {
      EXPECT_NEAR(law.event_probability, exact_pa(n, t), 1e-12);
    }
  }
}
