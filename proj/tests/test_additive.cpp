#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "harmonic/additive.hpp"
#include "harmonic/errors.hpp"
#include "harmonic/factorization.hpp"
#include "harmonic/primes.hpp"

using namespace harmonic;

namespace {

const PrimeTable& table_1e6() {
  static const PrimeTable t = sieve(1'000'000);
  return t;
}

AdditiveFunction by_name(std::string_view name) { return AdditiveFunction(theta_by_name(name)); }

}  // namespace

TEST(Valuation, Examples) {
  EXPECT_EQ(valuation(12, 2).exponent, 2u);
  EXPECT_EQ(valuation(7, 3).exponent, 0u);
  EXPECT_EQ(valuation(1u << 20, 2).exponent, 20u);
  EXPECT_EQ(valuation(12, 3, &table_1e6()).exponent, 1u);
  EXPECT_THROW(valuation(12, 4), DomainError);
  EXPECT_THROW(valuation(0, 2), DomainError);
}

TEST(Factorize, Examples) {
  const auto& t = table_1e6();
  EXPECT_EQ(factorize(60, t), (std::vector<Valuation>{{2, 2}, {3, 1}, {5, 1}}));
  EXPECT_TRUE(factorize(1, t).empty());
  EXPECT_EQ(factorize(32ull * 999983, t), (std::vector<Valuation>{{2, 5}, {999983, 1}}));
  EXPECT_THROW(factorize(1'000'003ull * 2, t), IncompleteFactorization);
  EXPECT_THROW(factorize(0, t), DomainError);
}

TEST(Factorize, ValuationInvariant) {
  const auto& t = table_1e6();
  for (std::uint64_t k = 1; k <= 5000; ++k) {
    std::uint64_t product = 1;
    for (const auto& v : factorize(k, t)) {
      std::uint64_t pe = 1;
      for (std::uint32_t i = 0; i < v.exponent; ++i) pe *= v.p;
      ASSERT_EQ(k % pe, 0u);
      ASSERT_NE(k % (pe * v.p), 0u);
      product *= pe;
    }
    ASSERT_EQ(product, k);
  }
}

TEST(Omega, CountsAndTableRequirement) {
  const auto small = sieve(10);
  std::array<int, 3> counts{};
  for (std::uint64_t k = 1; k <= 10; ++k) ++counts.at(count_distinct_prime_factors(k, small));
  EXPECT_EQ(counts, (std::array<int, 3>{1, 7, 2}));
  EXPECT_EQ(count_distinct_prime_factors(30030, sieve(200)), 6u);
  EXPECT_EQ(count_distinct_prime_factors(999983ull * 999979, table_1e6()), 2u);
  EXPECT_THROW(count_distinct_prime_factors(1000, sieve(10)), IncompleteFactorization);
}

TEST(Evaluate, Examples) {
  const auto& t = table_1e6();
  EXPECT_NEAR(evaluate(by_name("linear"), 1000, t), std::log(1000.0), 1e-12);
  EXPECT_NEAR(evaluate(by_name("linear"), 1000, t), 6.9078, 1e-4);
  EXPECT_EQ(evaluate(by_name("omega"), 60, t), 3.0);
  for (const auto& entry : theta_catalog()) EXPECT_EQ(evaluate(AdditiveFunction(entry.theta), 1, t), 0.0);
}

TEST(Evaluate, OnFactorization) {
  GeometricFactorization none(100);
  EXPECT_EQ(evaluate_on_factorization(by_name("square"), none), 0.0);

  GeometricFactorization cube(100);
  cube.push(2, 3);
  EXPECT_NEAR(evaluate_on_factorization(by_name("square"), cube), std::pow(3 * std::log(2.0), 2),
              1e-12);
  EXPECT_NEAR(evaluate_on_factorization(by_name("square"), cube), 4.3241, 1e-4);

  GeometricFactorization six(100);
  six.push(2, 1);
  six.push(3, 1);
  EXPECT_NEAR(evaluate_on_factorization(by_name("linear"), six), std::log(6.0), 1e-14);
}

TEST(Evaluate, ConsistencyIsExact) {
  const auto& t = table_1e6();
  for (const char* name : {"sqrt", "linear", "square", "linear-over-log", "omega"}) {
    const auto f = by_name(name);
    for (std::uint64_t k = 1; k <= 3000; ++k) {
      GeometricFactorization g(k);
      for (const auto& v : factorize(k, t)) g.push(v.p, v.exponent);
      ASSERT_EQ(evaluate(f, k, t), evaluate_on_factorization(f, g)) << name << " " << k;
    }
  }
}

TEST(Evaluate, DegreeOneIsLog) {
  const auto& t = table_1e6();
  const auto f = by_name("linear");
  for (std::uint64_t k = 2; k <= 100000; ++k) {
    const double expected = std::log(static_cast<double>(k));
    ASSERT_NEAR(evaluate(f, k, t), expected, 1e-10 * expected) << k;
  }
}

TEST(Evaluate, AdditiveOnCoprimePairs) {
  const auto t = sieve(31623);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> pick(1, 31622);
  int checked = 0;
  while (checked < 10000) {
    const auto a = pick(rng), b = pick(rng);
    if (std::gcd(a, b) != 1) continue;
    ++checked;
    for (const char* name : {"sqrt", "square", "linear-over-log", "omega"}) {
      const auto f = by_name(name);
      const double whole = evaluate(f, a * b, t);
      const double parts = evaluate(f, a, t) + evaluate(f, b, t);
      ASSERT_NEAR(whole, parts, 1e-10 * std::max(1.0, std::abs(whole))) << a << " " << b;
    }
  }
}

TEST(Evaluate, PrimePowerValue) {
  const auto f = by_name("square");
  EXPECT_DOUBLE_EQ(f.on_prime_power(5, 3), std::pow(3 * std::log(5.0), 2));
  EXPECT_EQ(f.on_prime_power(5, 0), 0.0);
}

TEST(Theta, ZeroAndCatalog) {
  for (const auto& entry : theta_catalog()) {
    EXPECT_EQ(entry.theta(0.0), 0.0) << entry.name;
    EXPECT_EQ(entry.theta(-1.0), 0.0) << entry.name;
  }
  EXPECT_EQ(theta_by_name("sqrt").degree(), 0.5);
  EXPECT_EQ(theta_by_name("linear").degree(), 1.0);
  EXPECT_EQ(theta_by_name("square").degree(), 2.0);
  EXPECT_EQ(theta_by_name("linear-over-log").degree(), 1.0);
  EXPECT_EQ(theta_by_name("omega").degree(), 0.0);
  EXPECT_FALSE(theta_by_name("omega").limit_simulatable());
  EXPECT_TRUE(theta_by_name("sqrt").limit_simulatable());
  EXPECT_EQ(theta_by_name("omega")(1e-9), 1.0);
  EXPECT_THROW(theta_by_name("cube"), ConfigError);
  EXPECT_THROW(ThetaSpec(-1.0, SlowFactor::constant, "bad"), DomainError);
}

TEST(Theta, SlowFactors) {
  EXPECT_EQ(parse_slow_factor("log1p"), SlowFactor::log1p);
  EXPECT_EQ(to_string(SlowFactor::inverse_log), "inverse-log");
  EXPECT_THROW(parse_slow_factor("log"), ConfigError);
  EXPECT_NEAR(theta_from_pair(2.0, "log1p")(3.0), 9 * std::log(4.0), 1e-12);
  EXPECT_NEAR(theta_from_pair(1.0, "inverse-log")(3.0), 3 / std::log(std::exp(1.0) + 3), 1e-12);
  ThetaSpec custom(1.5, [](double x) { return 2.0 + std::sin(x) / (1 + x); }, "custom");
  EXPECT_NEAR(custom(4.0), 8 * (2.0 + std::sin(4.0) / 5), 1e-12);
}

// theta(2x)/theta(x) -> 2^alpha. With a logarithmic factor the ratio carries
// the exact factor L(2x)/L(x), which approaches 1 only like log 2 / log x.
TEST(Theta, RegularVariationRatio) {
  for (double alpha : {0.5, 1.0, 2.0}) {
    for (auto slow : {SlowFactor::constant, SlowFactor::log1p, SlowFactor::inverse_log}) {
      const ThetaSpec th(alpha, slow, "t");
      double previous_gap = INFINITY;
      for (double x = 10; x <= 1e8; x *= 10) {
        const double ratio = th(2 * x) / th(x) / std::pow(2.0, alpha);
        double expected = 1.0;
        if (slow == SlowFactor::log1p) expected = std::log1p(2 * x) / std::log1p(x);
        if (slow == SlowFactor::inverse_log)
          expected = std::log(std::exp(1.0) + x) / std::log(std::exp(1.0) + 2 * x);
        EXPECT_NEAR(ratio, expected, 1e-12);
        const double gap = std::abs(ratio - 1.0);
        EXPECT_LE(gap, previous_gap + 1e-15);
        previous_gap = gap;
      }
      if (slow == SlowFactor::constant) {
        EXPECT_NEAR(th(2e8) / th(1e8), std::pow(2.0, alpha), 1e-12);
      } else {
        EXPECT_LE(previous_gap, std::log(2.0) / std::log(1e8));
      }
    }
  }
}

TEST(LinearStatistic, Identity) {
  const auto th = theta_by_name("square");
  GeometricFactorization g(1000);
  g.push(2, 2);
  g.push(7, 1);
  const double ln = std::log(1000.0);
  const double expected = 0.3 * (2 * std::pow(std::log(2.0), 2) + std::pow(std::log(7.0), 2)) /
                              (ln * ln) +
                          -1.2 * (2 * std::log(2.0) + std::log(7.0)) / ln;
  EXPECT_NEAR(linear_statistic(th, 1000, 0.3, -1.2, g), expected, 1e-14);
}

TEST(GeometricFactorization, ValueAndEvent) {
  GeometricFactorization g(100);
  g.push(2, 2);
  g.push(3, 0);
  g.push(5, 1);
  EXPECT_EQ(g.exponents().size(), 2u);
  EXPECT_EQ(g.exponent_of(3), 0u);
  EXPECT_EQ(g.exponent_of(2), 2u);
  EXPECT_EQ(g.value_up_to(100), std::optional<std::uint64_t>(20));
  EXPECT_FALSE(g.value_up_to(19).has_value());
  EXPECT_TRUE(g.in_event());
  EXPECT_NEAR(g.log_value(), std::log(20.0), 1e-14);
  EXPECT_THROW(g.push(3, 1), DomainError);

  // An exact boundary product is in the event.
  GeometricFactorization edge(1u << 30);
  edge.push(2, 30);
  EXPECT_TRUE(edge.in_event());
  GeometricFactorization huge(10);
  huge.push(2, 200);
  EXPECT_FALSE(huge.in_event());
}
