#include "harmonic/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numeric>
#include <ostream>

#include "harmonic/errors.hpp"
#include "harmonic/summation.hpp"

namespace harmonic {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : samples_(std::move(samples)) {
  if (std::any_of(samples_.begin(), samples_.end(), [](double x) { return std::isnan(x); })) {
    throw DomainError("EmpiricalDistribution: NaN sample");
  }
  std::sort(samples_.begin(), samples_.end());
}

double EmpiricalDistribution::ecdf(double x) const {
  if (samples_.empty()) throw DomainError("ecdf: empty sample");
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
  return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

void EmpiricalDistribution::merge(const EmpiricalDistribution& other) {
  std::vector<double> merged(samples_.size() + other.samples_.size());
  std::merge(samples_.begin(), samples_.end(), other.samples_.begin(), other.samples_.end(),
             merged.begin());
  samples_ = std::move(merged);
}

double EmpiricalDistribution::mean() const {
  if (samples_.empty()) throw DomainError("mean: empty sample");
  CompensatedSum sum;
  for (double x : samples_) sum += x;
  return sum.value() / static_cast<double>(samples_.size());
}

double ks_statistic(const EmpiricalDistribution& a, const std::function<double(double)>& cdf) {
  if (a.empty()) throw DomainError("ks_statistic: empty sample");
  const auto xs = a.samples();
  const double m = static_cast<double>(xs.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size();) {
    // Group ties: the ECDF jumps from i/m to j/m at xs[i].
    std::size_t j = i + 1;
    while (j < xs.size() && xs[j] == xs[i]) ++j;
    const double f = cdf(xs[i]);
    worst = std::max({worst, static_cast<double>(j) / m - f, f - static_cast<double>(i) / m});
    i = j;
  }
  return worst;
}

double ks_statistic_discrete(const EmpiricalDistribution& a, std::span<const double> atoms,
                             std::span<const double> cdf_at_atoms) {
  if (a.empty()) throw DomainError("ks_statistic_discrete: empty sample");
  if (atoms.size() != cdf_at_atoms.size()) {
    throw DomainError("ks_statistic_discrete: atoms and cdf sizes differ");
  }
  double worst = 0.0;
  // Below the first atom the target cdf is 0.
  if (!atoms.empty()) {
    const auto xs = a.samples();
    const auto below = std::lower_bound(xs.begin(), xs.end(), atoms.front()) - xs.begin();
    worst = static_cast<double>(below) / static_cast<double>(xs.size());
  }
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    worst = std::max(worst, std::abs(a.ecdf(atoms[i]) - cdf_at_atoms[i]));
  }
  return worst;
}

double ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  const auto xs = a.samples();
  const auto ys = b.samples();
  const double na = static_cast<double>(xs.size());
  const double nb = static_cast<double>(ys.size());
  std::size_t i = 0, j = 0;
  double worst = 0.0;
  while (i < xs.size() || j < ys.size()) {
    double x;
    if (j == ys.size() || (i < xs.size() && xs[i] <= ys[j])) {
      x = xs[i];
    } else {
      x = ys[j];
    }
    while (i < xs.size() && xs[i] == x) ++i;
    while (j < ys.size() && ys[j] == x) ++j;
    worst = std::max(worst, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return worst;
}

void CharFunctionGrid::write_csv(std::ostream& out) const {
  out << "u,re,im\n";
  out.precision(17);
  for (std::size_t k = 0; k < u_values.size(); ++k) {
    out << u_values[k] << ',' << values[k].real() << ',' << values[k].imag() << '\n';
  }
}

CharFunctionGrid empirical_charfn(std::span<const double> samples, std::span<const double> u_grid) {
  if (samples.empty()) throw DomainError("empirical_charfn: empty sample");
  CharFunctionGrid grid;
  grid.u_values.assign(u_grid.begin(), u_grid.end());
  grid.count = samples.size();
  grid.values.reserve(u_grid.size());
  const double m = static_cast<double>(samples.size());
  for (double u : u_grid) {
    double re = 0.0, im = 0.0;
    for (double x : samples) {
      const double t = u * x;
      re += std::cos(t);
      im += std::sin(t);
    }
    grid.values.emplace_back(re / m, im / m);
  }
  return grid;
}

CharFunctionGrid empirical_charfn(const EmpiricalDistribution& a, std::span<const double> u_grid) {
  return empirical_charfn(a.samples(), u_grid);
}

std::vector<double> linear_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw DomainError("linear_grid: bad range");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t k = 0; k < count; ++k) grid[k] = lo + static_cast<double>(k) * step;
  return grid;
}

double max_modulus_gap(const CharFunctionGrid& empirical,
                       const std::function<std::complex<double>(double)>& reference) {
  double worst = 0.0;
  for (std::size_t k = 0; k < empirical.u_values.size(); ++k) {
    worst = std::max(worst, std::abs(empirical.values[k] - reference(empirical.u_values[k])));
  }
  return worst;
}

ChiSquareResult chi_square_test(std::span<const std::uint64_t> observed,
                                std::span<const double> probabilities) {
  if (observed.size() != probabilities.size() || observed.size() < 2) {
    throw DomainError("chi_square_test: need matching observed/probabilities with >= 2 cells");
  }
  const double total =
      static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  if (total == 0.0) throw DomainError("chi_square_test: no observations");
  ChiSquareResult out;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    const double expected = total * probabilities[k];
    if (!(expected > 0.0)) throw DomainError("chi_square_test: cell with zero expectation");
    const double d = static_cast<double>(observed[k]) - expected;
    out.statistic += d * d / expected;
  }
  out.degrees_of_freedom = observed.size() - 1;
  const boost::math::chi_squared_distribution<double> law(
      static_cast<double>(out.degrees_of_freedom));
  out.p_value = boost::math::cdf(boost::math::complement(law, out.statistic));
  return out;
}

void RunningMoments::add(double x) {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
}

void RunningMoments::merge(const RunningMoments& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double n1 = static_cast<double>(count_);
  const double n2 = static_cast<double>(other.count_);
  const double delta = other.mean_ - mean_;
  const double n = n1 + n2;
  mean_ += delta * n2 / n;
  m2_ += other.m2_ + delta * delta * n1 * n2 / n;
  count_ += other.count_;
}

double RunningMoments::variance() const {
  return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
}

double RunningMoments::stderr_of_mean() const {
  return count_ > 0 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
}

void write_ecdf_csv(std::ostream& out, const EmpiricalDistribution& a, std::size_t max_rows) {
  out << "x,ecdf\n";
  out.precision(17);
  const auto xs = a.samples();
  if (xs.empty()) return;
  const std::size_t stride = std::max<std::size_t>(1, xs.size() / std::max<std::size_t>(max_rows, 1));
  const double m = static_cast<double>(xs.size());
  for (std::size_t i = stride - 1; i < xs.size(); i += stride) {
    out << xs[i] << ',' << static_cast<double>(i + 1) / m << '\n';
  }
  if ((xs.size() % stride) != 0) out << xs.back() << ",1\n";
}

}  // namespace harmonic
