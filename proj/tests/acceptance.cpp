// Acceptance runner: one PASS/FAIL line per criterion, tolerances and time
// limits fixed below. Exit status is 0 only if every line passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "edlab/campaign.hpp"
#include "edlab/error.hpp"
#include "edlab/verification.hpp"

using namespace edlab;

namespace {

constexpr std::uint64_t kSeed = 20'240'601;
// Slope stability under halving the smallest cutoff, relative.
constexpr double kLadderStability = 0.05;
constexpr double kSlopeBand = 0.15;

struct Criterion {
  std::string name;
  double seconds_limit;
  std::function<CheckResult()> body;
};

const RadialProfile& profile() {
  static const RadialProfile p = build_profile();
  return p;
}

const ExtendedDistortionField& field() {
  static const ExtendedDistortionField f(1.0, std::make_shared<const SectorSystem>(build_system(6)),
                                         200);
  return f;
}

bool stable_divergent(const DivergenceCertificate& c, std::ostringstream& why) {
  const double predicted = 2.0 - 2.0 * c.q;
  const bool ok = c.verdict == Classification::Divergent && c.checks.passed && c.epsilon1 > 0.0 &&
                  std::abs(c.probe.slope - predicted) <= kSlopeBand * std::abs(predicted) &&
                  std::abs(c.probe.halved_slope - c.probe.slope) <=
                      kLadderStability * std::abs(c.probe.slope);
  if (!ok) {
    why << " [" << to_string(c.verdict) << " q=" << c.q << " slope=" << c.probe.slope
        << " halved=" << c.probe.halved_slope << (c.reason.empty() ? "" : " " + c.reason) << "]";
  }
  return ok;
}

CheckResult headline() {
  CheckResult r;
  r.basis = "divergent for every listed perturbation, finite for the unperturbed field";
  std::ostringstream why;
  bool ok = true;
  double slowest = 0.0;
  std::size_t count = 0;
  const ComplexValue etas[] = {{0.5, 0.0}, {-0.5, 0.0}, {0.0, 0.5}, {0.0, -0.5},
                               std::polar(0.3, kPi / 4.0)};
  for (const TestFunction& phi : {TestFunction::zbar_bump(), TestFunction::izbar_bump()}) {
    for (ComplexValue eta : etas) {
      const auto start = std::chrono::steady_clock::now();
      CampaignOptions options;
      options.seed = kSeed;
      const DivergenceCertificate c = perturbed_energy_campaign(field(), phi, eta, options);
      slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                                 start).count());
      ++count;
      if (!stable_divergent(c, why)) {
        ok = false;
        why << ' ' << phi.name();
      }
    }
  }
  const DivergenceCertificate base = certify_unperturbed(field(), default_campaign_ladder());
  const DivergenceCertificate zero =
      perturbed_energy_campaign(field(), TestFunction::zero(), {0.5, 0.0});
  ok = ok && base.verdict == Classification::Finite &&
       zero.perturbation_case == PerturbationCase::Unperturbed &&
       zero.verdict == Classification::Finite && slowest < 300.0;
  r.value = base.energy;
  r.reference = termwise_energy_bound(field());
  std::ostringstream detail;
  detail << count << " campaigns, slowest " << slowest << " s; unperturbed "
         << to_string(base.verdict) << ", zero case " << to_string(zero.perturbation_case) << ' '
         << to_string(zero.verdict) << why.str();
  r.detail = detail.str();
  r.passed = ok;
  return r;
}

CheckResult sweep() {
  CheckResult r;
  r.basis = "positive minimum of epsilon1 over alpha";
  CampaignOptions options;
  options.seed = kSeed;
  const SweepResult s = alpha_sweep(field(), TestFunction::zbar_bump(), 0.3, 32, options);
  std::ostringstream why;
  bool stable = true;
  for (const DivergenceCertificate& c : s.certificates) stable = stable_divergent(c, why) && stable;
  r.value = s.min_epsilon;
  r.detail = "32 angles, all divergent: " + std::string(s.all_divergent ? "yes" : "no") + why.str();
  r.passed = s.all_divergent && stable && s.min_epsilon > 0.0;
  return r;
}

CheckResult localization() {
  CheckResult r;
  r.basis = "g = z + 0.1 zbar bump";
  const PlanarMap g = PlanarMap::perturbed_identity(TestFunction::zbar_bump(), 0.1);
  const Localization loc = localize_nonconformality(g, 1e-6);
  CampaignOptions options;
  options.seed = kSeed;
  const DivergenceCertificate c = perturbed_energy_campaign(field(), loc.phi, {1.0, 0.0}, options);
  std::ostringstream why;
  const bool ok = stable_divergent(c, why);
  r.value = loc.distortion;
  r.reference = 1.0;
  std::ostringstream detail;
  detail << "z0 = (" << loc.z0.real() << ", " << loc.z0.imag() << "), q = " << c.q << ", "
         << to_string(c.verdict) << why.str();
  r.detail = detail.str();
  r.passed = loc.distortion > 1.0 && ok;
  return r;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"f-integral", 1.0, [] { return check_f_integral(1e-11); }},
      {"basic-energy", 10.0, [] { return check_basic_energy(1e-9); }},
      {"f-dichotomy", 30.0, [] { return check_f_dichotomy(); }},
      {"profile", 60.0, [] { return check_profile(profile()); }},
      {"mu-symmetry", 60.0, [] { return check_mu_symmetry(profile(), kSeed, 1000); }},
      {"composition", 60.0, [] { return check_composition(kSeed, 10'000); }},
      {"sector-area", 60.0, [] { return check_sector_area(8); }},
      {"sector-density", 120.0,
       [] { return check_sector_density(field().system(), 1'000'000, kSeed); }},
      {"extended-energy", 120.0, [] { return check_extended_energy(field(), 1e-6); }},
      {"headline-dichotomy", 3000.0, headline},
      {"alpha-sweep", 600.0, sweep},
      {"localization", 300.0, localization},
      {"dirichlet-cauchy", 60.0, [] { return check_dirichlet(profile()); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Criterion& c = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    const CheckResult r = run_check(c.name, c.body);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool passed = r.passed && seconds <= c.seconds_limit;
    if (!passed) ++failures;
    std::printf("%-4s %2zu %-20s value=%.12g reference=%.12g time=%.2fs/%.0fs %s\n",
                passed ? "PASS" : "FAIL", i + 1, c.name.c_str(), r.value, r.reference, seconds,
                c.seconds_limit, r.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
