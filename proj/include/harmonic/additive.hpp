#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "harmonic/factorization.hpp"
#include "harmonic/primes.hpp"

namespace harmonic {

/// Slowly varying factors available from configuration.
enum class SlowFactor { constant, log1p, inverse_log };

std::string_view to_string(SlowFactor f);
SlowFactor parse_slow_factor(std::string_view name);

/// theta(x) = x^degree * L(x) for x > 0, theta(0) = 0.
///
/// The degree is carried explicitly. It is never estimated from theta.
class ThetaSpec {
 public:
  ThetaSpec(double degree, SlowFactor slow, std::string description);
  /// Custom slowly varying factor (code only, not reachable from configs).
  ThetaSpec(double degree, std::function<double(double)> slow, std::string description);

  double operator()(double x) const;

  double degree() const { return degree_; }
  const std::string& description() const { return description_; }

  // Catalog metadata.
  bool decreasing_near_infinity = false;
  bool limit_simulatable() const { return degree_ > 0.0; }

 private:
  double degree_;
  std::function<double(double)> slow_;
  std::string description_;
};

struct CatalogEntry {
  std::string name;
  ThetaSpec theta;
};

/// sqrt, linear, square, linear-over-log, omega.
const std::vector<CatalogEntry>& theta_catalog();
ThetaSpec theta_by_name(std::string_view name);
ThetaSpec theta_from_pair(double degree, std::string_view slow_factor_name);

/// The additive function iota[theta]: f(p^l) = theta(l log p).
class AdditiveFunction {
 public:
  explicit AdditiveFunction(ThetaSpec theta) : theta_(std::move(theta)) {}

  const ThetaSpec& theta() const { return theta_; }
  double on_prime_power(std::uint64_t p, std::uint32_t exponent) const;

 private:
  ThetaSpec theta_;
};

/// Largest m with p^m | k. When `table` is given and covers p, primality is
/// checked against it; otherwise by trial division.
Valuation valuation(std::uint64_t k, std::uint64_t p, const PrimeTable* table = nullptr);

/// Exact factorization; every prime factor of k must be <= table.limit().
std::vector<Valuation> factorize(std::uint64_t k, const PrimeTable& table);

/// omega(k); needs only table.limit()^2 >= k.
unsigned count_distinct_prime_factors(std::uint64_t k, const PrimeTable& table);

double evaluate(const AdditiveFunction& f, std::uint64_t k, const PrimeTable& table);
double evaluate_on_factorization(const AdditiveFunction& f, const GeometricFactorization& g);

/// sum_p (u1 theta(log p)/theta(log n) + u2 log p / log n) eps_p, the linear
/// statistic whose joint limit drives the conditioned theorem.
double linear_statistic(const ThetaSpec& theta, std::uint64_t n, double u1, double u2,
                        const GeometricFactorization& g);

}  // namespace harmonic
