#include <doctest.h>

#include <cmath>

#include "edlab/error.hpp"
#include "edlab/quadrature.hpp"

using namespace edlab;

TEST_CASE("integral of F r over (0, 1) is 1 / log 2") {
  const IntegralEstimate e = integrate_radial(RadialFunction::f_power(1.0), 0.0, 1.0, 1e-12);
  CHECK(std::abs(e.value - 1.0 / kLog2) <= 1e-9);
  CHECK(e.error <= 1e-12);
}

TEST_CASE("closed-form antiderivative 1/log(2/b) - 1/log(2/a)") {
  const IntegralEstimate e = integrate_radial(RadialFunction::f_power(1.0), 0.25, 0.5, 1e-13);
  // 1/log 4 - 1/log 8, frozen mpmath value
  CHECK(std::abs(e.value - 0.24044917348149390123) <= 1e-10);
  const RadialFunction h = RadialFunction::f_power(1.0);
  for (double a : {1e-3, 0.01, 0.1}) {
    for (double b : {0.2, 0.6, 1.0}) {
      const double exact = 1.0 / std::log(2.0 / b) - 1.0 / std::log(2.0 / a);
      CHECK(integrate_radial(h, a, b, 1e-13).value == doctest::Approx(exact).epsilon(1e-11));
    }
  }
}

TEST_CASE("plain interval integration") {
  CHECK(integrate_interval([](double r) { return r; }, 0.0, 1.0, 1e-14).value ==
        doctest::Approx(0.5).epsilon(1e-15));
  CHECK(integrate_interval([](double x) { return std::sin(x); }, 0.0, kPi, 1e-13).value ==
        doctest::Approx(2.0).epsilon(1e-13));
  CHECK_THROWS_AS(integrate_interval([](double) { return std::nan(""); }, 0.0, 1.0, 1e-8), Error);
}

TEST_CASE("tolerance below the roundoff floor throws") {
  try {
    integrate_radial(RadialFunction::f_power(1.0), 0.0, 1.0, 1e-30);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::QuadratureFailure);
  }
}

TEST_CASE("refinement monotonicity: halving tol never raises the error bound") {
  const RadialFunction h = RadialFunction::f_power(1.0);
  double previous = INFINITY;
  for (double tol = 1e-6; tol >= 1e-12; tol /= 2.0) {
    const IntegralEstimate e = integrate_radial(h, 0.0, 1.0, tol);
    CHECK(e.error <= tol);
    CHECK(e.error <= previous);
    previous = e.error;
  }
}

TEST_CASE("disk integral of e F is 2 pi e / log 2") {
  DiskField field;
  field.log_weighted = [](double l, double) { return 1.0 - 2.0 * std::log(kLog2 - l); };
  const IntegralEstimate e = integrate_disk(field, {0.0, 0.0}, 1.0, 1e-9);
  CHECK(e.value == doctest::Approx(24.640464427121843954).epsilon(1e-6));
}

TEST_CASE("polar and radial integrals agree for radial fields") {
  const IntegralEstimate radial = integrate_radial(
      RadialFunction::from_values([](double r) { return std::exp(-r * r); }), 0.0, 0.5, 1e-13);
  DiskField centered;
  centered.value = [](ComplexValue z) { return std::exp(-std::norm(z - ComplexValue{0.1, 0.2})); };
  const IntegralEstimate full = integrate_disk(centered, {0.1, 0.2}, 0.5, 1e-12);
  CHECK(full.value == doctest::Approx(2.0 * kPi * radial.value).epsilon(1e-10));
  // Annulus plus inner disk equals the full disk.
  const IntegralEstimate inner = integrate_disk(centered, {0.1, 0.2}, 0.2, 1e-12);
  const IntegralEstimate annulus = integrate_disk(centered, {0.1, 0.2}, 0.5, 1e-12, 0.2);
  CHECK(inner.value + annulus.value == doctest::Approx(full.value).epsilon(1e-11));
}

TEST_CASE("log integral handles huge exponents") {
  // log int_0^1 exp(1000 l) dl = 1000 - log 1000 + log(1 - e^{-1000})
  const double v = log_integral([](double l) { return 1000.0 * l; }, 0.0, 1.0);
  CHECK(v == doctest::Approx(1000.0 - std::log(1000.0)).epsilon(1e-12));
}

TEST_CASE("ladder parsing") {
  const CutoffLadder ladder = CutoffLadder::parse("1e-4:1e-2:10");
  CHECK(ladder.size() == 10);
  CHECK(ladder.log_eps()[0] == doctest::Approx(std::log(1e-4)));
  CHECK(ladder.smallest_log() == doctest::Approx(std::log(1e-4) + 9 * std::log(1e-2)));
  CHECK(ladder.with_halved_tail().size() == 11);
  CHECK_THROWS_AS(CutoffLadder::parse("1e-4:2:10"), Error);
  CHECK_THROWS_AS(CutoffLadder::parse("garbage"), Error);
  CHECK_THROWS_AS(CutoffLadder::parse("1e-4:1e-2:2"), Error);
}

TEST_CASE("divergence dichotomy of F^q") {
  const CutoffLadder ladder = CutoffLadder::geometric(1e-4, 1e-2, 10);
  const ProbeResult finite = divergence_probe(RadialFunction::f_power(1.0), ladder, 0.5, 0.0);
  CHECK(finite.estimate.classification == Classification::Finite);
  CHECK(finite.extrapolated == doctest::Approx(1.0 / std::log(4.0)).epsilon(1e-8));
  for (double q : {1.1, 1.5, 2.0}) {
    const double predicted = 2.0 - 2.0 * q;
    const ProbeResult p = divergence_probe(RadialFunction::f_power(q), ladder, 0.5, predicted);
    CHECK(p.estimate.classification == Classification::Divergent);
    CHECK(std::abs(p.slope - predicted) <= 0.15 * std::abs(predicted));
    CHECK(std::isinf(p.estimate.value));
  }
}

TEST_CASE("probe on a plain power law") {
  // int_eps^1 r^{-3} r dr = 1/eps - 1, slope -1
  const RadialFunction h = RadialFunction::from_log_weighted([](double l) { return -l; });
  const ProbeResult p = divergence_probe(h, CutoffLadder::geometric(1e-3, 1e-2, 6), 1.0, -1.0);
  CHECK(p.estimate.classification == Classification::Divergent);
  CHECK(p.slope == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("compensated sum") {
  const std::vector<double> v{1.0, 1e100, 1.0, -1e100};
  CHECK(compensated_sum(v) == 2.0);
}
