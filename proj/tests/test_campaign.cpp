#include <doctest.h>

#include <cmath>
#include <memory>

#include "edlab/campaign.hpp"
#include "edlab/error.hpp"

using namespace edlab;

namespace {

const ExtendedDistortionField& field() {
  static const ExtendedDistortionField f(1.0, std::make_shared<const SectorSystem>(build_system(6)),
                                         200);
  return f;
}

void check_divergent(const DivergenceCertificate& c) {
  CHECK(c.verdict == Classification::Divergent);
  CHECK(c.q > 1.0);
  CHECK(c.epsilon1 > 0.0);
  CHECK(c.checks.passed);
  CHECK(c.checks.pairing_violations == 0);
  CHECK(c.checks.composition_violations == 0);
  CHECK(c.checks.jacobian_violations == 0);
  CHECK(c.checks.density - c.checks.density_half_width >= kSectorDensity);
  const double predicted = 2.0 - 2.0 * c.q;
  CHECK(c.probe.predicted_slope == doctest::Approx(predicted));
  CHECK(std::abs(c.probe.slope - predicted) <= 0.15 * std::abs(predicted));
  CHECK(std::abs(c.probe.halved_slope - c.probe.slope) <= 0.05 * std::abs(c.probe.slope));
  CHECK(c.r0 > 0.0);
  CHECK(c.r0 < field().system().center(c.center_index).radius());
}

}  // namespace

TEST_CASE("unperturbed field has a finite certificate") {
  const DivergenceCertificate c = certify_unperturbed(field(), default_campaign_ladder());
  CHECK(c.perturbation_case == PerturbationCase::Unperturbed);
  CHECK(c.verdict == Classification::Finite);
  CHECK(c.energy == doctest::Approx(17.36400320792177025).epsilon(1e-8));
}

TEST_CASE("perturbations of the extended example diverge") {
  const ComplexValue etas[] = {{0.5, 0.0}, {-0.5, 0.0}, {0.0, 0.5}, {0.0, -0.5},
                               std::polar(0.3, kPi / 4.0)};
  for (const TestFunction& phi : {TestFunction::zbar_bump(), TestFunction::izbar_bump()}) {
    for (ComplexValue eta : etas) {
      CAPTURE(phi.name());
      CAPTURE(eta);
      const DivergenceCertificate c = perturbed_energy_campaign(field(), phi, eta);
      CHECK(c.perturbation_case != PerturbationCase::Unperturbed);
      check_divergent(c);
    }
  }
}

TEST_CASE("case and tag follow the sign of the leading term") {
  const TestFunction phi = TestFunction::zbar_bump();
  const auto c1 = perturbed_energy_campaign(field(), phi, {0.5, 0.0});
  CHECK(c1.perturbation_case == PerturbationCase::RealPart);
  CHECK(c1.tag == SectorTag::S2);
  const auto c2 = perturbed_energy_campaign(field(), phi, {-0.5, 0.0});
  CHECK(c2.tag == SectorTag::S1);
  const auto c3 = perturbed_energy_campaign(field(), phi, {0.0, 0.5});
  CHECK(c3.perturbation_case == PerturbationCase::ImaginaryPart);
  CHECK(c3.tag == SectorTag::S4);
  const auto c4 = perturbed_energy_campaign(field(), phi, {0.0, -0.5});
  CHECK(c4.tag == SectorTag::S3);
}

TEST_CASE("zero perturbation reports case 1") {
  const auto c = perturbed_energy_campaign(field(), TestFunction::zero(), {0.5, 0.0});
  CHECK(c.perturbation_case == PerturbationCase::Unperturbed);
  CHECK(c.verdict == Classification::Finite);
  const auto d = perturbed_energy_campaign(field(), TestFunction::zbar_bump(), {0.0, 0.0});
  CHECK(d.perturbation_case == PerturbationCase::Unperturbed);
}

TEST_CASE("campaigns are deterministic") {
  const auto a = perturbed_energy_campaign(field(), TestFunction::izbar_bump(), {0.2, 0.3});
  const auto b = perturbed_energy_campaign(field(), TestFunction::izbar_bump(), {0.2, 0.3});
  CHECK(a.q == b.q);
  CHECK(a.probe.log_partials == b.probe.log_partials);
  CHECK(a.checks.tagged == b.checks.tagged);
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(perturbed_energy_campaign(field(), TestFunction::zbar_bump(), {5.0, 0.0}), Error);
  CHECK_THROWS_AS(certify_divergence(field(), 1, 0.01, 1.0, 0.0, default_campaign_ladder()), Error);
  CHECK_THROWS_AS(certify_divergence(field(), 0, 0.01, 1.1, 0.0, default_campaign_ladder()), Error);
  CHECK_THROWS_AS(alpha_sweep(field(), TestFunction::zbar_bump(), 0.3, 8), Error);
}

TEST_CASE("no center inside the support") {
  const ExtendedDistortionField one(1.0, field().system_ptr(), 1);
  try {
    (void)perturbed_energy_campaign(one, TestFunction::zbar_bump(0.1, {0.3, 0.3}), {0.5, 0.0});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoCenterFound);
  }
}

TEST_CASE("alpha sweep") {
  const SweepResult s = alpha_sweep(field(), TestFunction::zbar_bump(), 0.3, 32);
  CHECK(s.alphas.size() == 32);
  CHECK(s.all_divergent);
  CHECK(s.min_epsilon > 0.0);
  for (const auto& c : s.certificates) CHECK(c.verdict == Classification::Divergent);
}

TEST_CASE("localization of a non-conformal map") {
  const PlanarMap g = PlanarMap::perturbed_identity(TestFunction::zbar_bump(), 0.1);
  const Localization loc = localize_nonconformality(g, 1e-6);
  CHECK(loc.distortion > 1.0);
  CHECK(std::abs(loc.z0 + loc.phi.value(loc.z0) - g.value(loc.z0)) < 1e-15);
  const auto c = perturbed_energy_campaign(field(), loc.phi, {1.0, 0.0});
  check_divergent(c);
}

TEST_CASE("conformal maps cannot be localized") {
  try {
    (void)localize_nonconformality(PlanarMap::rotation(0.3), 1e-6);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConformalEverywhere);
  }
}
