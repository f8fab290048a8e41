#include <doctest.h>

#include <cmath>

#include "edlab/error.hpp"
#include "edlab/test_function.hpp"

using namespace edlab;

namespace {

// Central-difference Wirtinger derivatives of phi at z.
WirtingerPair numeric(const TestFunction& phi, ComplexValue z, double h = 1e-6) {
  const ComplexValue i{0.0, 1.0};
  const ComplexValue fx = (phi.value(z + h) - phi.value(z - h)) / (2.0 * h);
  const ComplexValue fy = (phi.value(z + i * h) - phi.value(z - i * h)) / (2.0 * h);
  return {0.5 * (fx - i * fy), 0.5 * (fx + i * fy)};
}

}  // namespace

TEST_CASE("catalog values at the center") {
  CHECK(TestFunction::bump().value({0.0, 0.0}).real() == doctest::Approx(std::exp(-1.0)));
  const WirtingerPair z = TestFunction::zbar_bump().wirtinger({0.0, 0.0});
  CHECK(z.d_zbar.real() == doctest::Approx(std::exp(-1.0)));
  CHECK(std::abs(z.d_z) == 0.0);
  const WirtingerPair iz = TestFunction::izbar_bump().wirtinger({0.0, 0.0});
  CHECK(iz.d_zbar.imag() == doctest::Approx(std::exp(-1.0)));
  CHECK(TestFunction::zero().gradient_sup() == 0.0);
}

TEST_CASE("analytic derivatives agree with finite differences") {
  for (const auto& phi : {TestFunction::bump(), TestFunction::zbar_bump(),
                          TestFunction::izbar_bump(), TestFunction::plateau({0.1, 0.1}, 0.1, 0.3)}) {
    for (ComplexValue z : {ComplexValue{0.1, 0.05}, ComplexValue{-0.2, 0.3}, ComplexValue{0.3, -0.1}}) {
      const WirtingerPair a = phi.wirtinger(z);
      const WirtingerPair n = numeric(phi, z);
      CHECK(std::abs(a.d_z - n.d_z) < 1e-7);
      CHECK(std::abs(a.d_zbar - n.d_zbar) < 1e-7);
    }
  }
}

TEST_CASE("support and gradient bound") {
  const TestFunction phi = TestFunction::zbar_bump();
  CHECK(phi.value({0.6, 0.0}) == ComplexValue{});
  CHECK(phi.wirtinger({0.0, 0.55}).gradient_norm() == 0.0);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    for (int j = 0; j < 200; ++j) {
      const ComplexValue z{-0.5 + i / 199.0, -0.5 + j / 199.0};
      worst = std::max(worst, phi.wirtinger(z).gradient_norm());
    }
  }
  CHECK(worst <= phi.gradient_sup());
}

TEST_CASE("plateau is one on the inner disk") {
  const TestFunction chi = TestFunction::plateau({0.2, 0.0}, 0.05, 0.1);
  CHECK(chi.value({0.22, 0.01}).real() == doctest::Approx(1.0));
  CHECK(chi.value({0.35, 0.0}) == ComplexValue{});
  CHECK_THROWS_AS(TestFunction::plateau({0.0, 0.0}, 0.2, 0.1), Error);
}

TEST_CASE("unknown names and supports outside the disk throw") {
  CHECK_THROWS_AS(TestFunction::from_name("nope"), Error);
  CHECK_THROWS_AS(TestFunction::bump(0.5, {0.8, 0.0}), Error);
}

TEST_CASE("localized perturbation reproduces g near the plateau") {
  const PlanarMap g = PlanarMap::perturbed_identity(TestFunction::zbar_bump(), 0.1);
  const TestFunction chi = TestFunction::plateau({0.0, 0.0}, 0.05, 0.1);
  const TestFunction psi = localized_perturbation(g, chi);
  for (ComplexValue z : {ComplexValue{0.01, 0.02}, ComplexValue{-0.03, 0.0}}) {
    CHECK(std::abs(z + psi.value(z) - g.value(z)) < 1e-15);
    const WirtingerPair a = psi.wirtinger(z);
    const WirtingerPair b = g.derivatives(z);
    CHECK(std::abs(a.d_zbar - b.d_zbar) < 1e-12);
    CHECK(std::abs(1.0 + a.d_z - b.d_z) < 1e-12);
  }
  CHECK(psi.value({0.2, 0.0}) == ComplexValue{});
}

TEST_CASE("evaluator-based functions differentiate numerically") {
  const TestFunction base = TestFunction::zbar_bump(0.3, {0.1, 0.0});
  const TestFunction phi = TestFunction::from_evaluator(
      "custom", [base](ComplexValue z) { return base.value(z); }, base.center(), 0.3);
  const WirtingerPair a = phi.wirtinger({0.15, 0.05});
  const WirtingerPair b = base.wirtinger({0.15, 0.05});
  CHECK(std::abs(a.d_zbar - b.d_zbar) < 1e-8);
  CHECK(phi.gradient_sup() > 0.0);
}

TEST_CASE("rotation and identity are conformal") {
  const PlanarMap r = PlanarMap::rotation(0.7);
  CHECK(beltrami_of_map(r.derivatives({0.3, 0.2})).value() == ComplexValue{});
  CHECK(std::abs(r.value({1.0, 0.0}) - std::polar(1.0, 0.7)) < 1e-15);
  CHECK(PlanarMap::identity().value({0.3, 0.1}) == ComplexValue{0.3, 0.1});
}
