#include "harmonic/additive.hpp"

#include <cmath>
#include <numbers>

#include "harmonic/errors.hpp"

namespace harmonic {

std::string_view to_string(SlowFactor f) {
  switch (f) {
    case SlowFactor::constant: return "constant";
    case SlowFactor::log1p: return "log1p";
    case SlowFactor::inverse_log: return "inverse-log";
  }
  return "constant";
}

SlowFactor parse_slow_factor(std::string_view name) {
  if (name == "constant") return SlowFactor::constant;
  if (name == "log1p") return SlowFactor::log1p;
  if (name == "inverse-log") return SlowFactor::inverse_log;
  throw ConfigError("unknown slowly varying factor '" + std::string(name) +
                    "' (expected constant, log1p or inverse-log)");
}

namespace {

std::function<double(double)> slow_function(SlowFactor f) {
  switch (f) {
    case SlowFactor::constant: return [](double) { return 1.0; };
    case SlowFactor::log1p: return [](double x) { return std::log1p(x); };
    case SlowFactor::inverse_log: return [](double x) { return 1.0 / std::log(std::numbers::e + x); };
  }
  return [](double) { return 1.0; };
}

}  // namespace

ThetaSpec::ThetaSpec(double degree, SlowFactor slow, std::string description)
    : ThetaSpec(degree, slow_function(slow), std::move(description)) {}

ThetaSpec::ThetaSpec(double degree, std::function<double(double)> slow, std::string description)
    : degree_(degree), slow_(std::move(slow)), description_(std::move(description)) {
  if (!(degree_ >= 0.0) || !std::isfinite(degree_)) {
    throw DomainError("ThetaSpec: degree must be a finite nonnegative number");
  }
  if (!slow_) throw DomainError("ThetaSpec: slowly varying factor is empty");
}

double ThetaSpec::operator()(double x) const {
  if (x <= 0.0) return 0.0;
  const double power = degree_ == 0.0 ? 1.0 : degree_ == 1.0 ? x : std::pow(x, degree_);
  return power * slow_(x);
}

const std::vector<CatalogEntry>& theta_catalog() {
  // None of the power-type members is decreasing near infinity; the flag is
  // recorded as metadata and not enforced.
  static const std::vector<CatalogEntry> catalog = [] {
    std::vector<CatalogEntry> c;
    c.push_back({"sqrt", ThetaSpec(0.5, SlowFactor::constant, "theta(x) = x^0.5")});
    c.push_back({"linear", ThetaSpec(1.0, SlowFactor::constant, "theta(x) = x; iota[theta] = log")});
    c.push_back({"square", ThetaSpec(2.0, SlowFactor::constant, "theta(x) = x^2")});
    c.push_back({"linear-over-log",
                 ThetaSpec(1.0, SlowFactor::inverse_log, "theta(x) = x / log(e + x)")});
    ThetaSpec omega(0.0, SlowFactor::constant,
                    "theta(x) = 1 for x > 0; iota[theta] = omega. Degree 0: limit not "
                    "simulatable, excluded from limit experiments");
    omega.decreasing_near_infinity = true;
    c.push_back({"omega", std::move(omega)});
    return c;
  }();
  return catalog;
}

ThetaSpec theta_by_name(std::string_view name) {
  for (const auto& entry : theta_catalog()) {
    if (entry.name == name) return entry.theta;
  }
  throw ConfigError("unknown theta '" + std::string(name) +
                    "' (catalog: sqrt, linear, square, linear-over-log, omega)");
}

ThetaSpec theta_from_pair(double degree, std::string_view slow_factor_name) {
  const SlowFactor slow = parse_slow_factor(slow_factor_name);
  return ThetaSpec(degree, slow,
                   "theta(x) = x^" + std::to_string(degree) + " * " + std::string(to_string(slow)));
}

double AdditiveFunction::on_prime_power(std::uint64_t p, std::uint32_t exponent) const {
  if (exponent == 0) return 0.0;
  return theta_(exponent * std::log(static_cast<double>(p)));
}

Valuation valuation(std::uint64_t k, std::uint64_t p, const PrimeTable* table) {
  if (k == 0) throw DomainError("valuation: k must be positive");
  const bool prime = (table != nullptr && p <= table->limit()) ? table->contains(p)
                                                                 : is_prime_trial_division(p);
  if (!prime) throw DomainError("valuation: " + std::to_string(p) + " is not prime");
  std::uint32_t m = 0;
  while (k % p == 0) {
    k /= p;
    ++m;
  }
  return {p, m};
}

std::vector<Valuation> factorize(std::uint64_t k, const PrimeTable& table) {
  if (k == 0) throw DomainError("factorize: k must be positive");
  std::vector<Valuation> out;
  std::uint64_t rest = k;
  for (Prime q : table.primes()) {
    const std::uint64_t p = q;
    if (p * p > rest) break;
    if (rest % p != 0) continue;
    std::uint32_t e = 0;
    do {
      rest /= p;
      ++e;
    } while (rest % p == 0);
    out.push_back({p, e});
  }
  if (rest > 1) {
    // Every prime <= sqrt(rest) that the table holds has been divided out.
    // If rest is within the table it must therefore be prime.
    if (rest > table.limit()) {
      throw IncompleteFactorization("factorize: " + std::to_string(k) +
                                    " has a prime factor above the table limit " +
                                    std::to_string(table.limit()));
    }
    out.push_back({rest, 1});
  }
  return out;
}

unsigned count_distinct_prime_factors(std::uint64_t k, const PrimeTable& table) {
  if (k == 0) throw DomainError("count_distinct_prime_factors: k must be positive");
  const auto limit = table.limit();
  if (limit < 0x100000000ull && limit * limit < k) {
    throw IncompleteFactorization("count_distinct_prime_factors: table limit squared below k");
  }
  unsigned count = 0;
  std::uint64_t rest = k;
  for (Prime q : table.primes()) {
    const std::uint64_t p = q;
    if (p * p > rest) break;
    if (rest % p != 0) continue;
    ++count;
    do rest /= p;
    while (rest % p == 0);
  }
  return count + (rest > 1 ? 1u : 0u);
}

double evaluate(const AdditiveFunction& f, std::uint64_t k, const PrimeTable& table) {
  GeometricFactorization g(k);
  for (const auto& v : factorize(k, table)) g.push(v.p, v.exponent);
  return evaluate_on_factorization(f, g);
}

double evaluate_on_factorization(const AdditiveFunction& f, const GeometricFactorization& g) {
  double total = 0.0;
  for (const auto& v : g.exponents()) total += f.on_prime_power(v.p, v.exponent);
  return total;
}

double linear_statistic(const ThetaSpec& theta, std::uint64_t n, double u1, double u2,
                        const GeometricFactorization& g) {
  const double log_n = std::log(static_cast<double>(n));
  const double scale = theta(log_n);
  double total = 0.0;
  for (const auto& v : g.exponents()) {
    const double log_p = std::log(static_cast<double>(v.p));
    total += (u1 * theta(log_p) / scale + u2 * log_p / log_n) * v.exponent;
  }
  return total;
}

}  // namespace harmonic
