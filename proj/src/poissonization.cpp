#include "harmonic/poissonization.hpp"

#include <algorithm>
#include <cmath>

#include "harmonic/errors.hpp"
#include "harmonic/summation.hpp"

namespace harmonic {

double level_intensity(double p, std::uint32_t k) {
  return std::exp(-static_cast<double>(k) * std::log(p)) / k;
}

double total_intensity(double p, std::uint32_t k_cap) {
  double total = 0.0;
  double power = 1.0;
  for (std::uint32_t k = 1; k <= k_cap; ++k) {
    power /= p;
    const double term = power / k;
    total += term;
    if (term < total * 1e-18) break;
  }
  return total;
}

std::uint32_t PoissonizedExponents::count(std::uint64_t p, std::uint32_t level) const {
  for (const auto& c : cells) {
    if (c.p == p && c.level == level) return c.count;
    if (c.p > p) break;
  }
  return 0;
}

double truncation_bound(std::uint64_t n, std::uint32_t k_cap, const PrimeTable& table) {
  if (table.limit() < n) throw DomainError("truncation_bound: table limit below n");
  CompensatedSum total;
  for (Prime q : table.primes().first(table.count_up_to(n))) {
    const double p = q;
    double term = level_intensity(p, k_cap + 1);
    // Tails decrease geometrically in p; the rest of the primes are negligible.
    if (term == 0.0 || term < 1e-20 * total.value()) break;
    double power = std::exp(-static_cast<double>(k_cap + 1) * std::log(p));
    for (std::uint32_t k = k_cap + 1; term > 0.0; ++k) {
      total += term;
      if (term < 1e-30 * total.value()) break;
      power /= p;
      term = power / (k + 1);
    }
  }
  return total.value();
}

namespace {

std::uint64_t geometric_skip(double q, RandomStream& stream) {
  if (q >= 1.0) return 0;
  const double skip = std::floor(std::log(stream.uniform_positive()) / std::log1p(-q));
  return skip >= 1e18 ? std::uint64_t{1} << 62 : static_cast<std::uint64_t>(skip);
}

// Poisson(lambda) conditioned on being >= 1, by inversion (lambda <= log 2).
std::uint32_t zero_truncated_poisson(double lambda, RandomStream& stream) {
  const double nonzero = -std::expm1(-lambda);
  double target = stream.uniform() * nonzero;
  double pmf = std::exp(-lambda) * lambda;
  std::uint32_t k = 1;
  while (target >= pmf && pmf > 0.0) {
    target -= pmf;
    ++k;
    pmf *= lambda / k;
  }
  return k;
}

// Level k in {1..k_cap} with probability nu(p,k) / total.
std::uint32_t log_series_level(double p, std::uint32_t k_cap, double total, RandomStream& stream) {
  double target = stream.uniform() * total;
  double power = 1.0 / p;
  for (std::uint32_t k = 1; k < k_cap; ++k) {
    const double w = power / k;
    if (target < w) return k;
    target -= w;
    power /= p;
    if (power == 0.0) return k;
  }
  return k_cap;
}

}  // namespace

PoissonizedExponents sample_poissonized(std::uint64_t n, std::uint32_t k_cap,
                                        const PrimeTable& table, RandomStream& stream) {
  if (k_cap < 1) throw DomainError("sample_poissonized: k_cap must be >= 1");
  if (table.limit() < n) throw DomainError("sample_poissonized: table limit below n");
  PoissonizedExponents pe;
  pe.n = n;
  pe.k_cap = k_cap;
  pe.truncation_bound = truncation_bound(n, k_cap, table);

  const auto primes = table.primes();
  const std::size_t count = table.count_up_to(n);
  std::vector<std::uint32_t> per_level;
  std::size_t i = 0;
  while (i < count) {
    const double bound = -std::expm1(-total_intensity(primes[i], k_cap));
    i += geometric_skip(bound, stream);
    if (i >= count) break;
    const double p = primes[i];
    const double lambda = total_intensity(p, k_cap);
    const double nonzero = -std::expm1(-lambda);
    ++i;
    if (stream.uniform() * bound >= nonzero) continue;

    const std::uint32_t points = zero_truncated_poisson(lambda, stream);
    per_level.clear();
    for (std::uint32_t j = 0; j < points; ++j) {
      per_level.push_back(log_series_level(p, k_cap, lambda, stream));
    }
    std::sort(per_level.begin(), per_level.end());
    for (std::size_t a = 0; a < per_level.size();) {
      std::size_t b = a;
      while (b < per_level.size() && per_level[b] == per_level[a]) ++b;
      pe.cells.push_back({primes[i - 1], per_level[a], static_cast<std::uint32_t>(b - a)});
      a = b;
    }
  }
  return pe;
}

GeometricFactorization reconstruct_epsilon(const PoissonizedExponents& pe) {
  GeometricFactorization g(pe.n);
  for (std::size_t a = 0; a < pe.cells.size();) {
    std::uint32_t eps = 0;
    std::size_t b = a;
    for (; b < pe.cells.size() && pe.cells[b].p == pe.cells[a].p; ++b) {
      eps += pe.cells[b].level * pe.cells[b].count;
    }
    g.push(pe.cells[a].p, eps);
    a = b;
  }
  return g;
}

std::vector<double> compound_poisson_pmf(double p, std::uint32_t k_cap, std::uint32_t max_value) {
  if (!(p > 1.0)) throw DomainError("compound_poisson_pmf: p must exceed 1");
  std::vector<double> law(max_value + 1, 0.0);
  law[0] = 1.0;
  std::vector<double> next(max_value + 1);
  for (std::uint32_t k = 1; k <= k_cap; ++k) {
    const double lambda = level_intensity(p, k);
    // Law of k * Poisson(lambda) restricted to {0..max_value}.
    std::vector<double> level;
    double pmf = std::exp(-lambda);
    for (std::uint32_t j = 0; static_cast<std::uint64_t>(j) * k <= max_value; ++j) {
      if (j > 0) pmf *= lambda / j;
      if (pmf < 1e-300) break;
      level.push_back(pmf);
    }
    std::fill(next.begin(), next.end(), 0.0);
    for (std::uint32_t s = 0; s <= max_value; ++s) {
      if (law[s] == 0.0) continue;
      for (std::size_t j = 0; j < level.size() && s + j * k <= max_value; ++j) {
        next[s + j * k] += law[s] * level[j];
      }
    }
    law.swap(next);
  }
  return law;
}

}  // namespace harmonic
