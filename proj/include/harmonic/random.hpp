#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace harmonic {

/// Reproducible random stream identified by (seed, stream_id).
///
/// Distinct stream ids give statistically independent sequences, so batch
/// work can be split into fixed chunks (one stream per chunk) and produce
/// the same numbers regardless of how many workers process the chunks.
class RandomStream {
 public:
  using engine_type = std::mt19937_64;

  RandomStream(std::uint64_t seed, std::uint64_t stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id),
                      static_cast<std::uint32_t>(stream_id >> 32), 0x9e3779b9u};
    engine_.seed(seq);
  }

  /// Uniform on [0, 1).
  double uniform() { return unit_(engine_); }

  /// Uniform on (0, 1]; safe to pass to log().
  double uniform_positive() { return 1.0 - unit_(engine_); }

  /// Exponential with rate 1.
  double exponential() { return -std::log(uniform_positive()); }

  engine_type& engine() { return engine_; }

 private:
  engine_type engine_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

}  // namespace harmonic
