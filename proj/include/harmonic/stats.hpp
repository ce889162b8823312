#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace harmonic {

/// Sorted sample. Merging two distributions is a sorted-run merge, so the
/// result does not depend on the order in which parts are combined.
class EmpiricalDistribution {
 public:
  EmpiricalDistribution() = default;
  /// Sorts; rejects NaN.
  explicit EmpiricalDistribution(std::vector<double> samples);

  std::span<const double> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }

  /// Right-continuous ECDF: fraction of samples <= x.
  double ecdf(double x) const;

  void merge(const EmpiricalDistribution& other);

  double mean() const;

 private:
  std::vector<double> samples_;
};

/// sup_x |ECDF(x) - cdf(x)| for a continuous cdf, checked on both sides of
/// every jump.
double ks_statistic(const EmpiricalDistribution& a, const std::function<double(double)>& cdf);

/// KS distance to a discrete law given by its atoms (increasing) and the
/// cdf at each atom. Both step functions only jump at atoms, so comparing
/// there (and just below the first atom) gives the exact supremum when all
/// samples are atoms.
double ks_statistic_discrete(const EmpiricalDistribution& a, std::span<const double> atoms,
                             std::span<const double> cdf_at_atoms);

/// sup_x |ECDF_a(x) - ECDF_b(x)|.
double ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

/// 0.99 quantile of the Kolmogorov distribution: P[sqrt(m) D_m > 1.63] ~ 0.01.
inline constexpr double kKolmogorov99 = 1.63;

struct CharFunctionGrid {
  std::vector<double> u_values;
  std::vector<std::complex<double>> values;
  std::size_t count = 0;

  void write_csv(std::ostream& out) const;
};

/// (1/m) sum_j exp(i u x_j) at each grid point.
CharFunctionGrid empirical_charfn(std::span<const double> samples, std::span<const double> u_grid);
CharFunctionGrid empirical_charfn(const EmpiricalDistribution& a, std::span<const double> u_grid);

/// Evenly spaced grid lo, lo + step, ..., hi (inclusive up to rounding).
std::vector<double> linear_grid(double lo, double hi, double step);

/// sup over the grid of |empirical - reference(u)|.
double max_modulus_gap(const CharFunctionGrid& empirical,
                       const std::function<std::complex<double>(double)>& reference);

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t degrees_of_freedom = 0;
  double p_value = 0.0;
};

/// Pearson goodness of fit of observed counts against cell probabilities
/// (which should sum to 1).
ChiSquareResult chi_square_test(std::span<const std::uint64_t> observed,
                                std::span<const double> probabilities);

/// Welford accumulator; merge() follows Chan et al. Merging chunk results
/// in a fixed order gives identical output for any worker count.
class RunningMoments {
 public:
  void add(double x);
  void merge(const RunningMoments& other);

  std::size_t count() const { return count_; }
  double mean() const { return mean_; }
  double variance() const;  // unbiased
  double stderr_of_mean() const;

 private:
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// CSV "x,ecdf" at each distinct sample value (thinned to at most
/// max_rows rows).
void write_ecdf_csv(std::ostream& out, const EmpiricalDistribution& a, std::size_t max_rows = 2000);

}  // namespace harmonic
