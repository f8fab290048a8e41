#pragma once

// Self-checks of the basic and extended examples, shared by the command-line
// tool and the acceptance runner. Each check returns a result instead of
// throwing; numerical failures are recorded with their message.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "edlab/radial_stretch.hpp"
#include "edlab/report.hpp"

namespace edlab {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  /// Where the reference comes from: "closed form", "assembled constant", ...
  std::string basis;
  std::string detail;
  /// Set when an edlab::Error of a numerical kind aborted the check.
  bool numerical_failure = false;
};

/// Runs body, converting an edlab::Error into a failed result.
CheckResult run_check(const std::string& name, const std::function<CheckResult()>& body);

Json check_json(const CheckResult& check);

/// int_0^1 F(r) r dr against 1 / log 2 (absolute 1e-9).
CheckResult check_f_integral(double tol = 1e-11);
/// int over the disk of e^{K} against 2 pi e / log 2 (relative 1e-6).
CheckResult check_basic_energy(double rel_tol = 1e-9);
/// q = 1 finite and q in {1.1, 1.5, 2} divergent for int_0^{1/2} F^q r dr,
/// slopes within 15% of 2 - 2q.
CheckResult check_f_dichotomy();
/// rho(1) = 1, monotone nodes, |r rho'/rho - (K + sqrt(K^2 - 1))| <= 1e-8
/// relative on [1e-4, 1 - 1e-4] using the interpolant derivative.
CheckResult check_profile(const RadialProfile& profile);
/// The radial Beltrami formula and mu(iz) = -mu(z), mu(zbar) = conj mu(z),
/// mu(i zbar) = -conj mu(z) at `points` random points, to 1e-10.
CheckResult check_mu_symmetry(const RadialProfile& profile, std::uint64_t seed,
                              std::size_t points = 1000);
/// Conformal invariance to 1e-12 and K_o >= K_f K_g whenever Re(mu_f conj mu_g) <= 0.
CheckResult check_composition(std::uint64_t seed, std::size_t pairs = 10'000);
/// Dirichlet energies over (eps, 1/2), eps = 1e-2 .. 1e-5, form a Cauchy sequence.
CheckResult check_dirichlet(const RadialProfile& profile, double tol = 1e-12);
/// Area certificate at every level 1 .. max_level.
CheckResult check_sector_area(int max_level = 8);
/// Density lower bounds >= 1/32 at z_1 and three level-2 centers, for
/// r = 2^{-5}, 2^{-7}, 2^{-9} scaled by 2^{-4(n-1)}, all four tags.
CheckResult check_sector_density(const SectorSystem& system, std::size_t samples,
                                 std::uint64_t seed);
/// Energy of the truncated field <= 2 pi e^p / log 2 + e^p pi, and the
/// termwise bound <= 2 pi e^p / log 2.
CheckResult check_extended_energy(const ExtendedDistortionField& field, double tol = 1e-6);

}  // namespace edlab
