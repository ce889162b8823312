#include "harmonic/dickman.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "harmonic/errors.hpp"
#include "harmonic/stats.hpp"
#include "harmonic/summation.hpp"

namespace harmonic {
namespace {

// Cumulative integrals of samples g[0..L] on one unit interval with spacing
// h: out[i] = int_{t_0}^{t_i} g, using the cubic through four neighbouring
// points for each step (one-sided at the ends).
void cumulative_fourth_order(std::span<const double> g, double h, std::span<double> out) {
  const std::size_t last = g.size() - 1;
  CompensatedSum acc;
  out[0] = 0.0;
  for (std::size_t i = 0; i < last; ++i) {
    double step;
    if (i == 0) {
      step = 9 * g[0] + 19 * g[1] - 5 * g[2] + g[3];
    } else if (i + 1 == last) {
      step = g[i - 2] - 5 * g[i - 1] + 19 * g[i] + 9 * g[i + 1];
    } else {
      step = -g[i - 1] + 13 * g[i] + 13 * g[i + 1] - g[i + 2];
    }
    acc += step * h / 24.0;
    out[i + 1] = acc.value();
  }
}

}  // namespace

RhoTable solve_rho(double u_max, double step) {
  if (!(u_max >= 1.0) || !std::isfinite(u_max)) throw ConfigError("solve_rho: u_max must be >= 1");
  if (!(step > 0.0) || step > 1e-3) {
    throw ConfigError("solve_rho: step must be in (0, 1e-3] for the stated accuracy, got " +
                      std::to_string(step));
  }
  const double per_unit_real = 1.0 / step;
  const auto per_unit = static_cast<std::size_t>(std::llround(per_unit_real));
  if (std::abs(per_unit_real - static_cast<double>(per_unit)) > 1e-9 * per_unit_real) {
    throw ConfigError("solve_rho: 1/step must be an integer");
  }
  if (u_max > 1000.0) throw ResourceError("solve_rho: u_max above 1000");

  const auto units = static_cast<std::size_t>(std::ceil(u_max - 1e-12));
  const std::size_t points = units * per_unit + 1;
  const double h = 1.0 / static_cast<double>(per_unit);

  RhoTable table;
  table.u_max_ = u_max;
  table.per_unit_ = per_unit;
  table.values_.assign(points, 1.0);
  table.cumulative_.assign(points, 0.0);

  for (std::size_t j = 0; j <= per_unit; ++j) table.cumulative_[j] = static_cast<double>(j) * h;

  std::vector<double> g(per_unit + 1);
  std::vector<double> acc(per_unit + 1);
  for (std::size_t k = 1; k < units; ++k) {
    const std::size_t start = k * per_unit;
    for (std::size_t i = 0; i <= per_unit; ++i) {
      const double t = static_cast<double>(start + i) * h;
      g[i] = table.values_[start + i - per_unit] / t;
    }
    cumulative_fourth_order(g, h, acc);
    const double rho_k = table.values_[start];
    for (std::size_t i = 1; i <= per_unit; ++i) table.values_[start + i] = rho_k - acc[i];

    cumulative_fourth_order(std::span<const double>(table.values_).subspan(start, per_unit + 1), h,
                            acc);
    const double base = table.cumulative_[start];
    for (std::size_t i = 1; i <= per_unit; ++i) table.cumulative_[start + i] = base + acc[i];
  }
  return table;
}

double RhoTable::interpolate(std::span<const double> grid, double u) const {
  const double n = static_cast<double>(per_unit_);
  const double pos = u * n;
  auto j = static_cast<std::size_t>(std::floor(pos));
  if (j >= grid.size() - 1) j = grid.size() - 2;
  // Stay inside the unit interval holding [j, j+1].
  const std::size_t lo = (j / per_unit_) * per_unit_;
  const std::size_t hi = lo + per_unit_;
  std::size_t first = j == 0 ? 0 : j - 1;
  first = std::clamp(first, lo, hi - 3);
  const double x = pos - static_cast<double>(first);
  const double y0 = grid[first], y1 = grid[first + 1], y2 = grid[first + 2], y3 = grid[first + 3];
  // Lagrange cubic on nodes 0, 1, 2, 3.
  return -y0 * (x - 1) * (x - 2) * (x - 3) / 6 + y1 * x * (x - 2) * (x - 3) / 2 -
         y2 * x * (x - 1) * (x - 3) / 2 + y3 * x * (x - 1) * (x - 2) / 6;
}

double RhoTable::operator()(double u) const {
  if (u < 0.0 || u > u_max_ + 1e-12) {
    throw DomainError("rho: argument " + std::to_string(u) + " outside [0, u_max]");
  }
  if (u <= 1.0) return 1.0;
  return interpolate(values_, u);
}

double RhoTable::integral(double t) const {
  if (t < 0.0 || t > u_max_ + 1e-12) {
    throw DomainError("rho integral: argument " + std::to_string(t) + " outside [0, u_max]");
  }
  if (t <= 1.0) return t;
  return interpolate(cumulative_, t);
}

double RhoTable::max_delay_residual(double lo, double hi) const {
  const double h = step();
  const std::size_t first = static_cast<std::size_t>(std::ceil(std::max(lo, 1.0) / h - 1e-9));
  double worst = 0.0;
  for (std::size_t j = first; j + 1 < values_.size(); ++j) {
    const double mid = (static_cast<double>(j) + 0.5) * h;
    if (mid + 0.5 * h > hi + 1e-12) break;
    const double derivative = (values_[j + 1] - values_[j]) / h;
    const double delayed = (*this)(mid - 1.0);
    worst = std::max(worst, std::abs(mid * derivative + delayed));
  }
  return worst;
}

void RhoTable::write_csv(std::ostream& out, std::size_t stride) const {
  stride = std::max<std::size_t>(stride, 1);
  out << "u,rho\n";
  out.precision(17);
  const double h = step();
  for (std::size_t j = 0; j < values_.size(); j += stride) {
    const double u = static_cast<double>(j) * h;
    if (u > u_max_ + 1e-12) break;
    out << u << ',' << values_[j] << '\n';
  }
}

double dickman_normalizer(const RhoTable& table) {
  if (table.u_max() < 10.0) {
    throw ConfigError("dickman_normalizer: u_max must be >= 10 to neglect the rho tail");
  }
  return 1.0 / table.integral(table.u_max());
}

double dickman_cdf(const RhoTable& table, double t) {
  if (t > table.u_max()) {
    throw DomainError("dickman_cdf: t = " + std::to_string(t) + " beyond the rho table");
  }
  if (t <= 0.0) return 0.0;
  return dickman_normalizer(table) * table.integral(t);
}

// -- Poisson series ---------------------------------------------------------

PoissonArrivalSeries sample_arrivals(double horizon, RandomStream& stream) {
  if (!(horizon > 0.0)) throw DomainError("sample_arrivals: horizon must be positive");
  return arrivals_from_gaps(horizon, [&stream] { return stream.exponential(); });
}

double limit_tail_bound(double alpha, double horizon) {
  return std::max(std::exp(-horizon), std::exp(-alpha * horizon) / alpha);
}

namespace {

void check_alpha(double alpha) {
  if (alpha == 0.0) {
    throw DomainError(
        "alpha = 0: int x^0 d eta counts the points of a process with infinite intensity and "
        "diverges almost surely");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be positive");
}

}  // namespace

LimitPair limit_pair(const PoissonArrivalSeries& series, double alpha) {
  check_alpha(alpha);
  LimitPair out;
  for (double s : series.arrivals) {
    out.value_one += std::exp(-s);
    out.value_alpha += alpha == 1.0 ? std::exp(-s) : std::exp(-alpha * s);
  }
  out.truncation_tail_bound = limit_tail_bound(alpha, series.horizon);
  out.short_horizon = series.horizon < kMinHorizon;
  return out;
}

LimitPair sample_limit_pair(double alpha, RandomStream& stream, double horizon) {
  check_alpha(alpha);
  if (!(horizon > 0.0)) throw DomainError("sample_limit_pair: horizon must be positive");
  LimitPair out;
  for (double s = stream.exponential(); s <= horizon; s += stream.exponential()) {
    out.value_one += std::exp(-s);
    out.value_alpha += alpha == 1.0 ? std::exp(-s) : std::exp(-alpha * s);
  }
  out.truncation_tail_bound = limit_tail_bound(alpha, horizon);
  out.short_horizon = horizon < kMinHorizon;
  return out;
}

double sample_dickman(RandomStream& stream, double horizon) {
  double value = 0.0;
  for (double s = stream.exponential(); s <= horizon; s += stream.exponential()) {
    value += std::exp(-s);
  }
  return value;
}

ConditionedLimitDraw sample_conditioned_limit(double alpha, RandomStream& stream,
                                              std::size_t max_rejections, double horizon) {
  check_alpha(alpha);
  for (std::size_t trial = 1; trial <= max_rejections; ++trial) {
    double one = 0.0;
    double value = 0.0;
    bool rejected = false;
    for (double s = stream.exponential(); s <= horizon; s += stream.exponential()) {
      const double x = std::exp(-s);
      one += x;
      // The sum only grows, so the draw is lost as soon as it passes 1.
      if (one > 1.0) {
        rejected = true;
        break;
      }
      value += alpha == 1.0 ? x : std::exp(-alpha * s);
    }
    if (!rejected) return {value, trial};
  }
  throw RetriableError("sample_conditioned_limit: rejection budget of " +
                       std::to_string(max_rejections) + " exhausted");
}

// -- Characteristic functions -----------------------------------------------

namespace {

// (e^{i theta} - 1) / x without cancellation for small theta.
std::complex<double> phase_minus_one_over(double theta, double x) {
  const double half = std::sin(0.5 * theta);
  return {-2.0 * half * half / x, std::sin(theta) / x};
}

constexpr double kExponentTolerance = 1e-10;

std::string scientific(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

}  // namespace

std::complex<double> charfn_exponent(const std::function<double(double)>& f, double u) {
  if (u == 0.0) return {0.0, 0.0};
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto part = [&](bool imaginary) {
    double error = 0.0;
    const double value = integrator.integrate(
        [&](double x) {
          const auto z = phase_minus_one_over(u * f(x), x);
          return imaginary ? z.imag() : z.real();
        },
        0.0, 1.0, 1e-13, &error);
    if (!std::isfinite(value) || error > kExponentTolerance) {
      throw NumericError("charfn_poisson_integral: quadrature error estimate " +
                         scientific(error) + " above tolerance");
    }
    return value;
  };
  return {part(false), part(true)};
}

std::complex<double> charfn_poisson_integral(const std::function<double(double)>& f, double u) {
  return std::exp(charfn_exponent(f, u));
}

std::complex<double> limit_integral(double v1, double v2, double alpha, double u_lower) {
  check_alpha(alpha);
  if (!(u_lower >= 0.0 && u_lower < 1.0)) throw DomainError("limit_integral: u_lower not in [0, 1)");
  if (v1 == 0.0 && v2 == 0.0) return {0.0, 0.0};

  // Gauss-Kronrod stalls on the fractional powers at u = 0; tanh-sinh does not.
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto integrate = [&](auto&& fn, double a, double b) {
    double error = 0.0;
    const double value = integrator.integrate(fn, a, b, 1e-12, &error);
    if (!std::isfinite(value) || error > kExponentTolerance) {
      throw NumericError("limit_integral: quadrature error estimate " + scientific(error) +
                         " above tolerance");
    }
    return value;
  };

  if (alpha >= 1.0) {
    auto integrand = [=](double u, bool imaginary) {
      const auto z = phase_minus_one_over(v1 * std::pow(u, alpha) + v2 * u, u);
      return imaginary ? z.imag() : z.real();
    };
    return {integrate([&](double u) { return integrand(u, false); }, u_lower, 1.0),
            integrate([&](double u) { return integrand(u, true); }, u_lower, 1.0)};
  }
  // u = w^{1/alpha}: du / u = dw / (alpha w), phase v1 w + v2 w^{1/alpha}.
  const double w_lower = std::pow(u_lower, alpha);
  auto integrand = [=](double w, bool imaginary) {
    const auto z = phase_minus_one_over(v1 * w + v2 * std::pow(w, 1.0 / alpha), w);
    return (imaginary ? z.imag() : z.real()) / alpha;
  };
  return {integrate([&](double w) { return integrand(w, false); }, w_lower, 1.0),
          integrate([&](double w) { return integrand(w, true); }, w_lower, 1.0)};
}

// -- Bias identity ----------------------------------------------------------

double BiasReport::z_score() const {
  const double gap = std::abs(lhs - rhs);
  if (combined_stderr > 0.0) return gap / combined_stderr;
  return gap == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

BiasReport bias_identity_check(const std::function<double(double)>& f, std::size_t samples,
                               RandomStream& stream) {
  if (samples < 2) throw DomainError("bias_identity_check: need at least two samples");
  using Gauss64 = boost::math::quadrature::gauss<double, 64>;
  RunningMoments lhs, rhs, diff;
  for (std::size_t i = 0; i < samples; ++i) {
    const double d = sample_dickman(stream);
    const double left = d * f(d);
    const double right = Gauss64::integrate([&](double t) { return f(d + t); }, 0.0, 1.0);
    lhs.add(left);
    rhs.add(right);
    diff.add(left - right);
  }
  BiasReport report;
  report.lhs = lhs.mean();
  report.rhs = rhs.mean();
  report.lhs_stderr = lhs.stderr_of_mean();
  report.rhs_stderr = rhs.stderr_of_mean();
  report.combined_stderr = diff.stderr_of_mean();
  report.samples = samples;
  return report;
}

}  // namespace harmonic
