#pragma once

// Adaptive radial and planar quadrature with singular-endpoint handling,
// plus the cutoff-ladder machinery that turns "this integral is +infinity"
// into a finite slope fit.
//
// Radial integrals are always carried out in the variable l = log r. A
// radial integrand h(r) enters as the weighted function r^2 h(r) of l, since
//   int_a^b h(r) r dr = int_{log a}^{log b} r^2 h(r) dl.
// Integrands of the F-family (powers of 1 / (r^2 log^2(2/r))) supply
// log(r^2 h) directly, which keeps them exact far below the double range:
// the mass of F inside r < 1e-300 is still ~0.14% of the total.
//
// For a = 0 the half-line l in (-inf, log b] is mapped to t in [0, 1) by
// l = log b - t / (1 - t); with u = log(2/r) this is the substitution that
// turns F into the rational integrand 1 / (log(2/b)(1 - t) + t)^2.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "edlab/complex.hpp"

namespace edlab {

enum class Classification { Finite, Divergent, Inconclusive };

std::string_view to_string(Classification c) noexcept;

struct IntegralEstimate {
  double value = 0.0;
  double error = 0.0;
  std::size_t cells = 0;
  Classification classification = Classification::Finite;
};

/// Default cell budget for adaptive routines.
inline constexpr std::size_t kDefaultCellBudget = 1'000'000;

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
/// Stops once the summed error is <= max(abs_tol, rel_tol * |I|).
/// Throws QuadratureFailure if the tolerance sits below the roundoff floor
/// or the cell budget runs out.
IntegralEstimate integrate_interval(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, double rel_tol = 0.0,
                                    std::size_t max_cells = kDefaultCellBudget);

/// A radial integrand h(r) on (0, 1].
class RadialFunction {
 public:
  using Fn = std::function<double(double)>;

  /// Plain values h(r). Far below the double range r^2 h(r) is taken as 0.
  static RadialFunction from_values(Fn h);
  /// log(r^2 h(r)) as a function of l = log r; `log_power` is the m in an
  /// asymptotic log^{-m}(2/r) factor (0 if none), used by slope fits.
  static RadialFunction from_log_weighted(Fn log_r2h, double log_power = 0.0);
  /// (scale * F(r))^q with F(r) = 1 / (r^2 log^2(2/r)), scale = exp(log_scale).
  static RadialFunction f_power(double q, double log_scale = 0.0);

  double value(double r) const;
  /// r^2 h(r) at r = exp(log_r).
  double weighted(double log_r) const;
  /// log(r^2 h(r)) at r = exp(log_r); -inf where h vanishes.
  double log_weighted(double log_r) const;
  double log_power() const noexcept { return log_power_; }

 private:
  Fn values_;
  Fn log_weighted_;
  double log_power_ = 0.0;
};

/// int_a^b h(r) r dr for 0 <= a < b <= 1 with absolute error <= tol.
IntegralEstimate integrate_radial(const RadialFunction& h, double a, double b, double tol,
                                  std::size_t max_cells = kDefaultCellBudget);

/// Same integral with the lower limit given as log a (may be -infinity).
IntegralEstimate integrate_radial_log(const RadialFunction& h, double log_a, double log_b,
                                      double tol, std::size_t max_cells = kDefaultCellBudget);

/// log of int_{log_a}^{log_b} exp(psi(l)) dl, accurate to relative rel_tol.
/// Used where the integral itself would overflow.
double log_integral(const std::function<double(double)>& psi, double log_a, double log_b,
                    double rel_tol = 1e-10);

/// A planar field for integrate_disk. `log_weighted`, when present, returns
/// log(rho^2 f(center + rho e^{i theta})) from (log rho, theta); it is used
/// instead of `value` so that fields singular at the center stay finite.
struct DiskField {
  std::function<double(ComplexValue)> value;
  std::function<double(double, double)> log_weighted;
};

struct DiskOptions {
  /// Relative tolerance of the inner angular integrals.
  double inner_rel_tol = 1e-11;
  std::size_t max_cells = kDefaultCellBudget;
};

/// Integral of a field over the disk D(center, radius), minus D(center,
/// excluded) when given, on a polar grid: adaptive in log rho outside and
/// adaptive in theta inside.
IntegralEstimate integrate_disk(const DiskField& field, ComplexValue center, double radius,
                                double tol, std::optional<double> excluded = std::nullopt,
                                const DiskOptions& options = {});

/// Strictly decreasing cutoffs eps_0 > eps_1 > ... stored as log eps.
class CutoffLadder {
 public:
  /// eps_i = first * ratio^i for i < rungs. ratio in (0, 1), rungs >= 4.
  static CutoffLadder geometric(double first, double ratio, int rungs);
  static CutoffLadder from_log(std::vector<double> log_eps);
  /// Parses "first:ratio:rungs".
  static CutoffLadder parse(std::string_view spec);

  std::span<const double> log_eps() const noexcept { return log_eps_; }
  std::size_t size() const noexcept { return log_eps_.size(); }
  double smallest_log() const { return log_eps_.back(); }
  /// Same ladder with one extra rung at half the smallest cutoff.
  CutoffLadder with_halved_tail() const;

 private:
  explicit CutoffLadder(std::vector<double> log_eps);
  std::vector<double> log_eps_;
};

struct ProbeOptions {
  /// Raw log-log slope must fall below -min(raw_threshold, |predicted| / 2)
  /// for a divergent verdict.
  double raw_threshold = 0.05;
  /// Relative band around the predicted slope.
  double slope_band = 0.15;
  /// Maximum slope drift when the smallest cutoff is halved.
  double max_drift = 0.05;
  /// Maximum RMS residual of the slope fit (log units).
  double max_residual = 1e-2;
  /// Error allowed on the extrapolated limit for a finite verdict.
  double finite_tol = 1e-6;
  double rel_tol = 1e-11;
};

struct ProbeResult {
  IntegralEstimate estimate;
  std::vector<double> log_eps;
  /// log I(eps) where I(eps) = int_eps^b h r dr.
  std::vector<double> log_partials;
  /// log of the integral over [eps_i, eps_{i-1}] for i >= 1.
  std::vector<double> log_increments;
  double raw_slope = 0.0;
  /// Slope of log I + m log log(2/eps) against log eps (m = log power).
  double slope = 0.0;
  double slope_stderr = 0.0;
  double residual = 0.0;
  /// Slope after halving the smallest cutoff.
  double halved_slope = 0.0;
  double predicted_slope = 0.0;
  /// Extrapolated limit of I(eps) under the model A - B / log(2/eps).
  double extrapolated = 0.0;
};

/// Evaluates I(eps) on the ladder, fits its power-law exponent and
/// classifies the improper integral int_0^b h r dr as finite or divergent.
ProbeResult divergence_probe(const RadialFunction& h, const CutoffLadder& ladder, double b,
                             double predicted_slope, const ProbeOptions& options = {});

/// Neumaier-compensated sum in the given order.
double compensated_sum(std::span<const double> values);

}  // namespace edlab
