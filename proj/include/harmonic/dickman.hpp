#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <numbers>
#include <span>
#include <vector>

#include "harmonic/random.hpp"

namespace harmonic {

/// e^{-gamma}, the mass of the Dickman law on [0, 1].
inline const double kExpMinusGamma = std::exp(-std::numbers::egamma);

/// Dickman's rho on a uniform grid, solved from the integral form of
/// u rho'(u) = -rho(u - 1), rho = 1 on [0, 1]:
///   rho(u) = rho(k) - int_k^u rho(t - 1) / t dt   on [k, k + 1].
/// Each unit interval is advanced with a fourth-order cumulative rule that
/// only uses points of that interval, since rho has kinks at the integers.
class RhoTable {
 public:
  double u_max() const { return u_max_; }
  double step() const { return 1.0 / static_cast<double>(per_unit_); }
  /// Grid values rho(j * step), j = 0..; the grid is extended to the next
  /// integer above u_max.
  std::span<const double> values() const { return values_; }

  /// rho(u) for 0 <= u <= u_max by local cubic interpolation.
  double operator()(double u) const;
  /// int_0^t rho(x) dx for 0 <= t <= u_max.
  double integral(double t) const;
  /// max |u rho'(u) + rho(u - 1)| over grid midpoints in [lo, hi], with rho'
  /// from central differences of the grid.
  double max_delay_residual(double lo, double hi) const;

  /// CSV with header "u,rho", every `stride`-th grid point.
  void write_csv(std::ostream& out, std::size_t stride = 100) const;

 private:
  friend RhoTable solve_rho(double u_max, double step);
  double interpolate(std::span<const double> grid, double u) const;

  double u_max_ = 0.0;
  std::size_t per_unit_ = 0;
  std::vector<double> values_;
  std::vector<double> cumulative_;  // int_0^{u_j} rho
};

/// Requires u_max >= 1 and step <= 1e-3 with 1/step an integer (to 1e-9).
RhoTable solve_rho(double u_max = 10.0, double step = 1e-4);

/// 1 / int_0^{u_max} rho; should agree with e^{-gamma}. Needs u_max >= 10 so
/// the neglected tail is below 1e-10.
double dickman_normalizer(const RhoTable& table);

/// P[D <= t] = normalizer * int_0^t rho.
double dickman_cdf(const RhoTable& table, double t);

// -- Poisson series ---------------------------------------------------------

inline constexpr double kDefaultHorizon = 40.0;
inline constexpr double kMinHorizon = 30.0;

/// Unit-rate Poisson arrivals s_1 < s_2 < ... <= horizon. The map
/// x = exp(-s) turns them into the points of a Poisson process on (0, 1]
/// with intensity dx / x.
struct PoissonArrivalSeries {
  double horizon = 0.0;
  std::vector<double> arrivals;
};

/// Arrivals built from a gap source (each call returns the next gap).
template <class GapSource>
PoissonArrivalSeries arrivals_from_gaps(double horizon, GapSource&& next_gap) {
  PoissonArrivalSeries series{horizon, {}};
  double s = next_gap();
  while (s <= horizon) {
    series.arrivals.push_back(s);
    s += next_gap();
  }
  return series;
}

PoissonArrivalSeries sample_arrivals(double horizon, RandomStream& stream);

/// (int x^alpha d eta, int x d eta) realised on a series.
struct LimitPair {
  double value_alpha = 0.0;
  double value_one = 0.0;
  /// Bound on the expected contribution of points beyond the horizon:
  /// max(e^{-T}, e^{-alpha T} / alpha).
  double truncation_tail_bound = 0.0;
  /// Horizon below kMinHorizon; callers record this as a warning.
  bool short_horizon = false;
};

double limit_tail_bound(double alpha, double horizon);

/// alpha must be > 0; alpha = 0 makes int x^0 d eta infinite.
LimitPair limit_pair(const PoissonArrivalSeries& series, double alpha);

/// Same as limit_pair(sample_arrivals(horizon, stream), alpha) without
/// storing the arrivals; consumes the stream identically.
LimitPair sample_limit_pair(double alpha, RandomStream& stream, double horizon = kDefaultHorizon);

/// One draw of the Dickman law (int x d eta).
double sample_dickman(RandomStream& stream, double horizon = kDefaultHorizon);

struct ConditionedLimitDraw {
  double value = 0.0;  // int x^alpha d eta on {int x d eta <= 1}
  std::size_t trials = 0;
};

ConditionedLimitDraw sample_conditioned_limit(double alpha, RandomStream& stream,
                                              std::size_t max_rejections = 1000,
                                              double horizon = kDefaultHorizon);

// -- Characteristic functions -----------------------------------------------

/// exp(int_0^1 (e^{i u f(x)} - 1) / x dx), the characteristic function of
/// the Poisson integral X[f], by tanh-sinh quadrature (abs. tol. 1e-10 on
/// the exponent). Throws NumericError when the error estimate is too large.
std::complex<double> charfn_poisson_integral(const std::function<double(double)>& f, double u);

/// The exponent itself, int_0^1 (e^{i u f(x)} - 1) / x dx.
std::complex<double> charfn_exponent(const std::function<double(double)>& f, double u);

/// int_{u_lower}^1 (e^{i (v1 u^alpha + v2 u)} - 1) / u du by tanh-sinh
/// quadrature; for alpha < 1 the substitution u = w^{1/alpha} removes the
/// endpoint singularity.
std::complex<double> limit_integral(double v1, double v2, double alpha, double u_lower = 0.0);

// -- Bias identity ----------------------------------------------------------

/// E[D f(D)] against int_0^1 E[f(D + t)] dt over the same Dickman draws.
struct BiasReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double lhs_stderr = 0.0;
  double rhs_stderr = 0.0;
  /// Standard error of the paired difference lhs - rhs.
  double combined_stderr = 0.0;
  std::size_t samples = 0;

  double z_score() const;
};

BiasReport bias_identity_check(const std::function<double(double)>& f, std::size_t samples,
                               RandomStream& stream);

}  // namespace harmonic
