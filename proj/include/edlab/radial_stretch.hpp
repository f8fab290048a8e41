#pragma once

// The basic example: profile F, the distortion target K(r), the stretch
// rho(r) and the radial map f(z) = (z / |z|) rho(|z|).
//
// Internally everything runs in sigma = log(1/r). There
//   K(sigma)         = 1 + 2 sigma - 2 log(log 2 + sigma)
//   r rho'(r)/rho(r) = g(sigma) = K + sqrt(K^2 - 1)
//   log rho(sigma)   = -int_0^sigma g(s) ds.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "edlab/beltrami.hpp"

namespace edlab {

/// F(r) = 1 / (r^2 log^2(2/r)) on (0, 1].
double profile_F(double r);

/// K(r) = 1 - 2 log(r log(2/r)) on (0, 1).
DistortionValue basic_distortion(double r);

/// Stretch ratio r rho'/rho = K + sqrt(K^2 - 1) at sigma = log(1/r) >= 0.
double stretch_ratio(double sigma);

/// Tabulated log rho on a grid uniform in log(1/r), with quintic Hermite
/// interpolation. Below the last node log rho is integrated on demand.
class RadialProfile {
 public:
  static constexpr std::size_t kDefaultNodes = 2048;
  static constexpr double kDefaultTolerance = 1e-10;
  static constexpr double kDefaultInnerRadius = 1e-8;

  /// Radii in increasing order; the last one is 1.
  std::vector<double> grid() const;
  /// log rho at grid(), same order.
  std::vector<double> log_rho_values() const;
  double tol() const noexcept { return tol_; }
  std::size_t size() const noexcept { return sigma_.size(); }

  double log_rho(double r) const;
  double rho(double r) const;
  /// r rho'(r) / rho(r), from the defining identity.
  double stretch(double r) const;
  /// rho'(r) = rho(r) stretch(r) / r.
  double rho_dot(double r) const;
  /// r rho'/rho taken from the derivative of the interpolant itself.
  double interpolated_stretch(double r) const;

  /// log r below which log rho < -1/tol.
  double vanishing_log_radius() const noexcept { return vanishing_log_r_; }

  std::string to_json() const;
  /// Rebuilds a profile from to_json() output. Throws Format on bad input.
  static RadialProfile from_json(std::string_view text);

 private:
  friend RadialProfile build_profile(double tol, std::size_t nodes, double inner_radius);
  RadialProfile(std::vector<double> sigma, std::vector<double> log_rho, double tol);

  double log_rho_sigma(double sigma) const;
  double log_rho_tail(double sigma) const;
  void locate_vanishing_radius();

  std::vector<double> sigma_;    // increasing, sigma_[0] = 0
  std::vector<double> log_rho_;  // at sigma_
  double tol_;
  double vanishing_log_r_ = 0.0;
};

/// Builds the profile so that |log rho - quadrature| <= tol at every node and
/// cell midpoint; the node count doubles until that holds.
/// Throws QuadratureFailure when refinement does not converge.
RadialProfile build_profile(double tol = RadialProfile::kDefaultTolerance,
                            std::size_t nodes = RadialProfile::kDefaultNodes,
                            double inner_radius = RadialProfile::kDefaultInnerRadius);

/// f(z) = (z / |z|) rho(|z|), f(0) = 0.
ComplexValue radial_map(ComplexValue z, const RadialProfile& profile);

/// mu_f(z) = (z / zbar) (r rho' - rho) / (r rho' + rho) for 0 < |z| < 1.
BeltramiValue radial_beltrami(ComplexValue z, const RadialProfile& profile);

/// 2 pi int_eps^R (rho'^2 + rho^2 / r^2) r dr; 0 when eps == R.
double dirichlet_energy_probe(const RadialProfile& profile, double eps, double radius,
                              double tol = 1e-12);

struct DirichletSequence {
  std::vector<double> eps;
  std::vector<double> energies;
  /// energies[i] - energies[i - 1], integrated directly over the annulus.
  std::vector<double> increments;
  bool increasing = false;
  bool increments_decreasing = false;
  /// Upper bound for the limit: last energy plus a geometric tail estimate.
  double limit_bound = 0.0;
  bool cauchy = false;
};

/// Dirichlet energies over (eps_i, R) for decreasing eps_i, built by adding
/// annulus increments so that monotonicity is exact.
DirichletSequence dirichlet_energy_sequence(const RadialProfile& profile,
                                            const std::vector<double>& eps, double radius,
                                            double tol = 1e-12);

}  // namespace edlab
