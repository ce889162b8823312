#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include "harmonic/errors.hpp"
#include "harmonic/primes.hpp"
#include "oracles.hpp"

using namespace harmonic;

namespace {

std::vector<std::uint64_t> as_u64(const PrimeTable& t) {
  return {t.primes().begin(), t.primes().end()};
}

}  // namespace

TEST(Sieve, SmallTables) {
  EXPECT_EQ(as_u64(sieve(10)), (std::vector<std::uint64_t>{2, 3, 5, 7}));
  EXPECT_EQ(as_u64(sieve(2)), (std::vector<std::uint64_t>{2}));
  EXPECT_EQ(as_u64(sieve(3)), (std::vector<std::uint64_t>{2, 3}));
  EXPECT_EQ(sieve(100).size(), 25u);
  EXPECT_EQ(sieve(1000).size(), 168u);
}

TEST(Sieve, MatchesTrialDivisionUpTo1e4) {
  const auto expected = oracle::primes_up_to(10000);
  EXPECT_EQ(as_u64(sieve(10000)), expected);
  std::size_t count = 0;
  for (std::uint64_t n = 2; n <= 10000; ++n) {
    if (oracle::is_prime(n)) ++count;
    ASSERT_EQ(sieve(n).size(), count) << "n=" << n;
  }
}

TEST(Sieve, PiOfMillion) {
  const auto table = sieve(1'000'000);
  EXPECT_EQ(table.size(), oracle::primes_up_to(1'000'000).size());
  EXPECT_EQ(table.size(), 78498u);
  EXPECT_TRUE(table.contains(999983));
  EXPECT_FALSE(table.contains(999981));
  EXPECT_EQ(table.count_up_to(1000), 168u);
  EXPECT_EQ(table.count_up_to(5'000'000), 78498u);
}

TEST(Sieve, SegmentBoundaries) {
  // Crosses several segments of odd candidates.
  const auto table = sieve(2'000'000);
  for (std::size_t i = 1; i < table.size(); ++i) ASSERT_LT(table[i - 1], table[i]);
  for (std::size_t i = table.size() - 50; i < table.size(); ++i)
    EXPECT_TRUE(oracle::is_prime(table[i]));
  EXPECT_EQ(table.count_up_to(1'000'000), 78498u);
}

TEST(Sieve, Errors) {
  EXPECT_THROW(sieve(0), DomainError);
  EXPECT_THROW(sieve(1), DomainError);
  EXPECT_THROW(sieve(kMaxSieveLimit + 1), ResourceError);
}

TEST(Sieve, TruncateAndTrialDivision) {
  const auto t = truncate(sieve(1000), 30);
  EXPECT_EQ(t.limit(), 30u);
  EXPECT_EQ(t.size(), 10u);
  for (std::uint64_t k = 0; k < 2000; ++k) EXPECT_EQ(is_prime_trial_division(k), oracle::is_prime(k));
}

TEST(PrimeCache, RoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "harmonic_prime_cache_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "p.bin";
  std::filesystem::remove(path);

  const auto made = sieve_cached(50000, path);
  ASSERT_TRUE(std::filesystem::exists(path));
  EXPECT_EQ(std::filesystem::file_size(path), 5 + 16 + 8 * made.size());
  std::ifstream in(path, std::ios::binary);
  char magic[5];
  in.read(magic, 5);
  EXPECT_EQ(std::string(magic, 5), "PTBL1");

  const auto loaded = PrimeTable::load(path);
  EXPECT_EQ(loaded.limit(), 50000u);
  EXPECT_EQ(as_u64(loaded), as_u64(made));

  // A smaller request is served from the cache by truncation.
  EXPECT_EQ(sieve_cached(1000, path).size(), 168u);

  std::ofstream(path, std::ios::binary) << "XXXXX garbage";
  EXPECT_ANY_THROW(PrimeTable::load(path));
  std::filesystem::remove_all(dir);
}

TEST(Mertens, SmallValues) {
  const auto s10 = mertens_sums(sieve(10));
  const double expected =
      std::log(2.0) / 2 + std::log(3.0) / 3 + std::log(5.0) / 5 + std::log(7.0) / 7;
  EXPECT_NEAR(s10.log_weighted_sum, expected, 1e-14);
  EXPECT_NEAR(s10.log_weighted_sum, 1.31265, 1e-5);
  EXPECT_NEAR(s10.deviation1, 0.990, 1e-3);
  EXPECT_GT(s10.bound_ratio(), 1.0);  // the 2/log n form fails at n = 10
  EXPECT_DOUBLE_EQ(mertens_sums(sieve(2)).reciprocal_sum, 0.5);
}

TEST(Mertens, DirectSumOracle) {
  const auto table = sieve(1'000'000);
  long double log_sum = 0, rec_sum = 0;
  for (auto p : oracle::primes_up_to(1'000'000)) {
    log_sum += std::log(static_cast<long double>(p)) / p;
    rec_sum += 1.0L / p;
  }
  const auto s = mertens_sums(table);
  EXPECT_NEAR(s.log_weighted_sum, static_cast<double>(log_sum), 1e-11);
  EXPECT_NEAR(s.reciprocal_sum, static_cast<double>(rec_sum), 1e-12);
  EXPECT_LE(s.deviation1, 2.0);
  EXPECT_NEAR(s.deviation2_centered,
              static_cast<double>(rec_sum) - std::log(std::log(1e6)), 1e-12);
}

TEST(Mertens, BoundAndMonotonicity) {
  const auto table = sieve(10000);
  double last_log = -1, last_rec = -1;
  for (std::uint64_t n = 2; n <= 10000; ++n) {
    const auto s = mertens_sums(table, n);
    ASSERT_LE(s.deviation1, 2.0) << n;
    ASSERT_GE(s.log_weighted_sum, last_log);
    if (table.contains(n)) {
      ASSERT_GT(s.log_weighted_sum, last_log);
      ASSERT_GT(s.reciprocal_sum, last_rec);
    }
    last_log = s.log_weighted_sum;
    last_rec = s.reciprocal_sum;
  }
  const auto big = sieve(1'000'000);
  EXPECT_LE(mertens_sums(big, 100000).deviation1, 2.0);
  EXPECT_THROW(mertens_sums(table, 20000), DomainError);
}

TEST(Mertens, DoublingStability) {
  const auto table = sieve(1'000'000);
  for (std::uint64_t n = 100; 2 * n <= 1'000'000; n *= 2) {
    const double a = mertens_sums(table, n).deviation2_centered;
    const double b = mertens_sums(table, 2 * n).deviation2_centered;
    EXPECT_LE(std::abs(a - b), 5 / std::log(n) + 5 / std::log(2.0 * n)) << n;
  }
}

TEST(Mertens, ConstantEstimate) {
  const auto table = sieve(1'000'000);
  std::vector<MertensSums> grid{mertens_sums(table, 10000), mertens_sums(table, 100000),
                                mertens_sums(table)};
  const auto est = estimate_mertens_constant(grid);
  long double rec = 0;
  for (auto p : oracle::primes_up_to(1'000'000)) rec += 1.0L / p;
  const double brute = static_cast<double>(rec) - std::log(std::log(1e6));
  EXPECT_NEAR(est.estimate, brute, 1e-12);
  EXPECT_NEAR(est.estimate, 0.26149, 0.01);
  EXPECT_EQ(est.n, 1'000'000u);

  std::vector<MertensSums> pair{grid[0], grid[2]};
  EXPECT_LE(estimate_mertens_constant(pair).spread, 5 / std::log(1e4));

  std::vector<MertensSums> flat{grid[1], grid[2]};
  flat[0].deviation2_centered = flat[1].deviation2_centered;
  EXPECT_EQ(estimate_mertens_constant(flat).spread, 0.0);

  std::vector<MertensSums> single{grid[2]};
  EXPECT_ANY_THROW(estimate_mertens_constant(single));
  std::vector<MertensSums> tiny{mertens_sums(table, 100), mertens_sums(table, 1000)};
  EXPECT_ANY_THROW(estimate_mertens_constant(tiny));
}
