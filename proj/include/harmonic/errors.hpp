#pragma once

#include <stdexcept>
#include <string>

namespace harmonic {

// Precondition on a numeric argument violated (limit < 2, alpha = 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Request exceeds what the implementation is willing to allocate.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A rejection sampler ran out of budget. Retrying with a fresh stream is safe.
class RetriableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Quadrature or another numerical routine failed to reach its tolerance.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid experiment configuration or solver parameters.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// factorize() met a cofactor with a prime factor above the table limit.
class IncompleteFactorization : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace harmonic
