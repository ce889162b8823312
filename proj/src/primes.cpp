#include "harmonic/primes.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "harmonic/errors.hpp"
#include "harmonic/summation.hpp"

namespace harmonic {
namespace {

// Odd numbers per segment; 256 KiB of flags fits comfortably in L2.
constexpr std::uint64_t kSegmentOdds = 1 << 18;
constexpr std::array<char, 5> kCacheMagic{'P', 'T', 'B', 'L', '1'};

std::vector<Prime> simple_sieve(std::uint64_t limit) {
  std::vector<char> composite(limit + 1, 0);
  std::vector<Prime> primes;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<Prime>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
  }
  return primes;
}

void write_u64(std::ostream& out, std::uint64_t v) {
  std::array<unsigned char, 8> bytes{};
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

std::uint64_t read_u64(std::istream& in) {
  std::array<unsigned char, 8> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw ResourceError("prime cache truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

}  // namespace

PrimeTable::PrimeTable(std::uint64_t limit, std::vector<Prime> primes)
    : limit_(limit), primes_(std::make_shared<const std::vector<Prime>>(std::move(primes))) {}

std::size_t PrimeTable::count_up_to(std::uint64_t x) const {
  const auto& p = *primes_;
  return static_cast<std::size_t>(
      std::upper_bound(p.begin(), p.end(), x,
                       [](std::uint64_t v, Prime q) { return v < static_cast<std::uint64_t>(q); }) -
      p.begin());
}

bool PrimeTable::contains(std::uint64_t p) const {
  if (p > limit_) return false;
  return std::binary_search(primes_->begin(), primes_->end(), static_cast<Prime>(p));
}

void PrimeTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ResourceError("cannot open prime cache for writing: " + path.string());
  out.write(kCacheMagic.data(), kCacheMagic.size());
  write_u64(out, limit_);
  write_u64(out, primes_->size());
  for (Prime p : *primes_) write_u64(out, p);
  if (!out) throw ResourceError("failed writing prime cache: " + path.string());
}

PrimeTable PrimeTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResourceError("cannot open prime cache: " + path.string());
  std::array<char, 5> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kCacheMagic) throw ResourceError("bad prime cache header: " + path.string());
  const std::uint64_t limit = read_u64(in);
  const std::uint64_t count = read_u64(in);
  if (limit > kMaxSieveLimit || count > limit) {
    throw ResourceError("prime cache header out of range: " + path.string());
  }
  std::vector<Prime> primes;
  primes.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t p = read_u64(in);
    if (p > limit || (!primes.empty() && p <= primes.back())) {
      throw ResourceError("prime cache is not a sorted table: " + path.string());
    }
    primes.push_back(static_cast<Prime>(p));
  }
  return PrimeTable(limit, std::move(primes));
}

PrimeTable sieve(std::uint64_t limit) {
  if (limit < 2) throw DomainError("sieve: limit must be >= 2, got " + std::to_string(limit));
  if (limit > kMaxSieveLimit) {
    throw ResourceError("sieve: limit " + std::to_string(limit) + " exceeds the supported cap of " +
                        std::to_string(kMaxSieveLimit));
  }

  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;
  const std::vector<Prime> base = simple_sieve(root);

  std::vector<Prime> primes;
  // pi(x) < 1.26 x / log x for x > 1
  primes.reserve(static_cast<std::size_t>(1.26 * static_cast<double>(limit) /
                                          std::log(static_cast<double>(limit))) + 8);
  primes.push_back(2);

  // Segment k covers the odd numbers low, low+2, ..., index i <-> low + 2i.
  std::vector<char> flags(kSegmentOdds);
  std::vector<std::uint64_t> next_multiple;  // for base[1..]
  next_multiple.reserve(base.size());
  for (std::size_t j = 1; j < base.size(); ++j) {
    next_multiple.push_back(static_cast<std::uint64_t>(base[j]) * base[j]);
  }

  for (std::uint64_t low = 3; low <= limit; low += 2 * kSegmentOdds) {
    const std::uint64_t high = std::min(limit, low + 2 * kSegmentOdds - 1);
    const std::uint64_t span = (high - low) / 2 + 1;
    std::fill(flags.begin(), flags.begin() + static_cast<std::ptrdiff_t>(span), 1);
    for (std::size_t j = 1; j < base.size(); ++j) {
      const std::uint64_t p = base[j];
      std::uint64_t m = next_multiple[j - 1];
      if (m > high) continue;
      for (; m <= high; m += 2 * p) flags[(m - low) / 2] = 0;
      next_multiple[j - 1] = m;
    }
    for (std::uint64_t i = 0; i < span; ++i) {
      if (flags[i]) primes.push_back(static_cast<Prime>(low + 2 * i));
    }
  }
  return PrimeTable(limit, std::move(primes));
}

PrimeTable sieve_cached(std::uint64_t limit, const std::filesystem::path& cache) {
  if (cache.empty()) return sieve(limit);
  std::error_code ec;
  if (std::filesystem::exists(cache, ec)) {
    PrimeTable cached = PrimeTable::load(cache);
    if (cached.limit() == limit) return cached;
    if (cached.limit() > limit) return truncate(cached, limit);
  }
  PrimeTable table = sieve(limit);
  table.save(cache);
  return table;
}

PrimeTable truncate(const PrimeTable& table, std::uint64_t limit) {
  if (limit > table.limit()) throw DomainError("truncate: limit above table limit");
  const auto primes = table.primes().first(table.count_up_to(limit));
  return PrimeTable(limit, std::vector<Prime>(primes.begin(), primes.end()));
}

bool is_prime_trial_division(std::uint64_t k) {
  if (k < 2) return false;
  if (k % 2 == 0) return k == 2;
  for (std::uint64_t d = 3; d * d <= k; d += 2) {
    if (k % d == 0) return false;
  }
  return true;
}

double MertensSums::bound_ratio() const {
  return deviation1 * std::log(static_cast<double>(n)) / 2.0;
}

MertensSums mertens_sums(const PrimeTable& table) { return mertens_sums(table, table.limit()); }

MertensSums mertens_sums(const PrimeTable& table, std::uint64_t n) {
  if (table.empty()) throw DomainError("mertens_sums: empty prime table");
  if (n > table.limit()) throw DomainError("mertens_sums: n exceeds the table limit");
  if (n < 2) throw DomainError("mertens_sums: n must be >= 2");
  CompensatedSum log_weighted;
  CompensatedSum reciprocal;
  for (Prime p : table.primes().first(table.count_up_to(n))) {
    const double inv = 1.0 / p;
    log_weighted += std::log(static_cast<double>(p)) * inv;
    reciprocal += inv;
  }
  MertensSums out;
  out.n = n;
  out.log_weighted_sum = log_weighted.value();
  out.reciprocal_sum = reciprocal.value();
  const double log_n = std::log(static_cast<double>(n));
  out.deviation1 = std::abs(out.log_weighted_sum - log_n);
  out.deviation2_centered = out.reciprocal_sum - std::log(log_n);
  return out;
}

MertensConstantEstimate estimate_mertens_constant(std::span<const MertensSums> sums) {
  if (sums.size() < 2) throw DomainError("estimate_mertens_constant: need at least two entries");
  const auto largest = std::max_element(sums.begin(), sums.end(),
                                        [](const auto& a, const auto& b) { return a.n < b.n; });
  if (largest->n < 100'000) {
    throw DomainError("estimate_mertens_constant: largest n must be >= 1e5");
  }
  const auto [lo, hi] = std::minmax_element(
      sums.begin(), sums.end(),
      [](const auto& a, const auto& b) { return a.deviation2_centered < b.deviation2_centered; });
  return {largest->deviation2_centered, hi->deviation2_centered - lo->deviation2_centered,
          largest->n};
}

}  // namespace harmonic
