#include "edlab/verification.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "edlab/error.hpp"
#include "edlab/extended_field.hpp"

namespace edlab {

namespace {

ComplexValue random_point(std::uint64_t seed, std::uint64_t i, double min_radius) {
  const double r = std::max(std::sqrt(counter_uniform(seed, 2 * i)), min_radius);
  return std::polar(r, 2.0 * kPi * counter_uniform(seed, 2 * i + 1));
}

std::string format(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

CheckResult run_check(const std::string& name, const std::function<CheckResult()>& body) {
  try {
    CheckResult result = body();
    result.name = name;
    return result;
  } catch (const Error& e) {
    CheckResult result;
    result.name = name;
    result.value = std::nan("");
    result.detail = std::string(to_string(e.kind())) + ": " + e.what();
    result.numerical_failure = is_numerical(e.kind());
    return result;
  }
}

Json check_json(const CheckResult& c) {
  Json j;
  j["name"] = c.name;
  j["passed"] = c.passed;
  j["value"] = number(c.value);
  j["reference"] = number(c.reference);
  j["tolerance"] = number(c.tolerance);
  j["basis"] = c.basis;
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

CheckResult check_f_integral(double tol) {
  CheckResult c;
  c.reference = 1.0 / kLog2;
  c.tolerance = 1e-9;
  c.basis = "closed form 1/log 2";
  c.value = integrate_radial(RadialFunction::f_power(1.0), 0.0, 1.0, tol).value;
  c.passed = std::abs(c.value - c.reference) <= c.tolerance;
  return c;
}

CheckResult check_basic_energy(double rel_tol) {
  CheckResult c;
  c.reference = 2.0 * kPi * kE / kLog2;
  c.tolerance = 1e-6;
  c.basis = "assembled constant 2 pi e / log 2";
  DiskField field;
  // log(rho^2 e^{K(rho)}) with K(r) = 1 - 2 log(r log(2/r))
  field.log_weighted = [](double l, double) { return 1.0 - 2.0 * std::log(kLog2 - l); };
  c.value = integrate_disk(field, {0.0, 0.0}, 1.0, rel_tol * c.reference).value;
  c.passed = std::abs(c.value - c.reference) <= c.tolerance * c.reference;
  return c;
}

CheckResult check_f_dichotomy() {
  CheckResult c;
  c.basis = "threshold q = 1; slope 2 - 2q";
  c.tolerance = 0.15;
  const CutoffLadder ladder = CutoffLadder::geometric(1e-4, 1e-2, 10);
  const ProbeResult finite = divergence_probe(RadialFunction::f_power(1.0), ladder, 0.5, 0.0);
  // int_0^{1/2} F r dr = 1 / log 4
  c.reference = 1.0 / std::log(4.0);
  c.value = finite.extrapolated;
  bool ok = finite.estimate.classification == Classification::Finite &&
            std::abs(finite.extrapolated - c.reference) <= 1e-6;
  std::ostringstream detail;
  detail << "q=1 " << to_string(finite.estimate.classification) << " limit "
         << format(finite.extrapolated);
  for (double q : {1.1, 1.5, 2.0}) {
    const double predicted = 2.0 - 2.0 * q;
    const ProbeResult p = divergence_probe(RadialFunction::f_power(q), ladder, 0.5, predicted);
    const bool slope_ok = std::abs(p.slope - predicted) <= c.tolerance * std::abs(predicted);
    ok = ok && slope_ok && p.estimate.classification == Classification::Divergent;
    detail << "; q=" << q << ' ' << to_string(p.estimate.classification) << " slope "
           << format(p.slope) << " vs " << predicted;
  }
  c.detail = detail.str();
  c.passed = ok;
  return c;
}

CheckResult check_profile(const RadialProfile& profile) {
  CheckResult c;
  c.basis = "rho(1) = 1, monotone, r rho'/rho = K + sqrt(K^2 - 1)";
  c.tolerance = 1e-8;
  const std::vector<double> log_rho = profile.log_rho_values();
  const bool monotone = std::adjacent_find(log_rho.begin(), log_rho.end(),
                                           std::greater_equal<>()) == log_rho.end();
  const bool fixed = profile.rho(1.0) == 1.0;
  double worst = 0.0;
  constexpr int kPoints = 2001;
  const double la = std::log(1e-4);
  const double lb = std::log1p(-1e-4);
  for (int i = 0; i < kPoints; ++i) {
    const double r = std::exp(la + (lb - la) * i / (kPoints - 1));
    const double exact = stretch_ratio(-std::log(r));
    worst = std::max(worst, std::abs(profile.interpolated_stretch(r) - exact) / exact);
  }
  c.value = worst;
  c.reference = 0.0;
  c.detail = std::string("rho(1) ") + (fixed ? "= 1" : "!= 1") + ", nodes " +
             std::to_string(profile.size()) + (monotone ? " monotone" : " not monotone");
  c.passed = fixed && monotone && worst <= c.tolerance;
  return c;
}

CheckResult check_mu_symmetry(const RadialProfile& profile, std::uint64_t seed,
                              std::size_t points) {
  CheckResult c;
  c.basis = "symmetries of (z / zbar)(r rho' - rho)/(r rho' + rho)";
  c.tolerance = 1e-10;
  const ComplexValue i{0.0, 1.0};
  double worst = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    const ComplexValue z = random_point(seed, k, 1e-6);
    const ComplexValue mu = radial_beltrami(z, profile).value();
    const double s = profile.interpolated_stretch(std::abs(z));
    const ComplexValue formula = z / std::conj(z) * ((s - 1.0) / (s + 1.0));
    worst = std::max({worst, std::abs(mu - formula),
                      std::abs(radial_beltrami(i * z, profile).value() + mu),
                      std::abs(radial_beltrami(std::conj(z), profile).value() - std::conj(mu)),
                      std::abs(radial_beltrami(i * std::conj(z), profile).value() +
                               std::conj(mu))});
  }
  c.value = worst;
  c.detail = std::to_string(points) + " points";
  c.passed = worst <= c.tolerance;
  return c;
}

CheckResult check_composition(std::uint64_t seed, std::size_t pairs) {
  CheckResult c;
  c.basis = "K_f K_g [1 - 4 Re(mu_f conj mu_g) / ((1 + |mu_f|^2)(1 + |mu_g|^2))]";
  c.tolerance = 1e-12;
  double invariance = 0.0;
  std::size_t violations = 0;
  std::size_t negative = 0;
  const BeltramiValue zero(ComplexValue{});
  for (std::size_t k = 0; k < pairs; ++k) {
    const BeltramiValue mu_f(0.999 * random_point(seed, 2 * k, 0.0));
    const BeltramiValue mu_g(0.999 * random_point(seed, 2 * k + 1, 0.0));
    const double k_f = distortion_from_beltrami(mu_f).value();
    const double k_g = distortion_from_beltrami(mu_g).value();
    invariance = std::max({invariance, std::abs(compose_distortion(mu_f, zero).value() - k_f) / k_f,
                           std::abs(compose_distortion(zero, mu_g).value() - k_g) / k_g});
    if ((mu_f.value() * std::conj(mu_g.value())).real() <= 0.0) {
      ++negative;
      if (compose_distortion(mu_f, mu_g).value() < k_f * k_g * (1.0 - 1e-15)) ++violations;
    }
  }
  c.value = invariance;
  c.detail = std::to_string(violations) + " lower-bound violations in " +
             std::to_string(negative) + " pairs with non-positive pairing";
  c.passed = invariance <= c.tolerance && violations == 0;
  return c;
}

CheckResult check_dirichlet(const RadialProfile& profile, double tol) {
  CheckResult c;
  c.basis = "Cauchy sequence of annulus energies";
  const DirichletSequence s = dirichlet_energy_sequence(profile, {1e-2, 1e-3, 1e-4, 1e-5}, 0.5, tol);
  c.value = s.energies.back();
  c.reference = s.limit_bound;
  std::ostringstream detail;
  detail << "increments";
  for (double d : s.increments) detail << ' ' << format(d);
  c.detail = detail.str();
  c.passed = s.cauchy && s.increments_decreasing && std::isfinite(s.limit_bound) &&
             s.energies.back() <= s.limit_bound;
  return c;
}

CheckResult check_sector_area(int max_level) {
  CheckResult c;
  c.basis = "exact count sum against pi/63 and pi/32";
  c.reference = kPi / 63.0;
  bool ok = true;
  double worst = 0.0;
  for (int level = 1; level <= max_level; ++level) {
    const AreaCertificate a = area_certificate(build_system(level));
    ok = ok && a.holds;
    worst = std::max(worst, a.area);
  }
  c.value = worst;
  c.detail = "levels 1.." + std::to_string(max_level);
  c.passed = ok;
  return c;
}

CheckResult check_sector_density(const SectorSystem& system, std::size_t samples,
                                 std::uint64_t seed) {
  CheckResult c;
  c.basis = "density floor 1/32";
  c.reference = kDensityFloor;
  std::vector<std::size_t> centers{1};
  for (std::size_t k = 1; k <= system.centers().size() && centers.size() < 4; ++k) {
    if (system.center(k).level == 2) centers.push_back(k);
  }
  double worst = 1.0;
  std::size_t cells = 0;
  for (std::size_t k : centers) {
    const DyadicCenter& center = system.center(k);
    for (int e : {5, 7, 9}) {
      const double r = std::ldexp(1.0, -e - 4 * (center.level - 1));
      for (const DensityEstimate& d : density_estimates(system, center, r, samples, seed)) {
        worst = std::min(worst, d.lower());
        ++cells;
      }
    }
  }
  c.value = worst;
  c.detail = std::to_string(cells) + " estimates of " + std::to_string(samples) + " samples";
  c.passed = worst >= kDensityFloor;
  return c;
}

CheckResult check_extended_energy(const ExtendedDistortionField& field, double tol) {
  CheckResult c;
  const double scale = std::exp(field.p());
  c.basis = "2 pi e^p / log 2 + e^p pi; termwise bound under 2 pi e^p / log 2";
  c.reference = series_energy_ceiling(field.p()) + scale * kPi;
  const EnergyEstimate e = extended_energy(field, tol);
  const double termwise = termwise_energy_bound(field);
  c.value = e.total.value;
  c.tolerance = e.total.error;
  c.detail = "series " + format(e.series_part) + ", clamp " + format(e.clamp_part) +
             ", termwise " + format(termwise);
  c.passed = c.value + c.tolerance <= c.reference && termwise <= series_energy_ceiling(field.p());
  return c;
}

}  // namespace edlab
