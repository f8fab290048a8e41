#include "edlab/beltrami.hpp"

#include <algorithm>
#include <sstream>

#include "edlab/error.hpp"

namespace edlab {

namespace {

std::string describe(ComplexValue z) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << z.real() << ", " << z.imag() << ")";
  return os.str();
}

void check_consistent(DistortionValue k, BeltramiValue mu, const char* which) {
  const double expected = distortion_from_beltrami(mu).value();
  if (std::abs(k.value() - expected) > kConsistencyTolerance * expected) {
    std::ostringstream os;
    os.precision(17);
    os << "compose_distortion: K_" << which << " = " << k.value()
       << " disagrees with K(mu_" << which << ") = " << expected;
    throw Error(ErrorKind::InconsistentInputs, os.str());
  }
}

}  // namespace

BeltramiValue::BeltramiValue(ComplexValue mu) : mu_(mu) {
  if (!is_finite(mu) || std::norm(mu) >= 1.0) {
    throw Error(ErrorKind::DegenerateBeltrami,
                "Beltrami coefficient must satisfy |mu| < 1, got " + describe(mu));
  }
}

DistortionValue::DistortionValue(double k) : k_(k) {
  if (!(k >= 1.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "distortion must be >= 1, got " << k;
    throw Error(ErrorKind::InvalidDistortion, os.str());
  }
}

DistortionValue distortion_from_beltrami(BeltramiValue mu) {
  const double m2 = std::norm(mu.value());
  return DistortionValue((1.0 + m2) / (1.0 - m2));
}

double beltrami_modulus_from_distortion(DistortionValue k) {
  const double kv = k.value();
  return std::sqrt((kv - 1.0) / (kv + 1.0));
}

DistortionValue compose_distortion(DistortionValue k_f, BeltramiValue mu_f,
                                   DistortionValue k_g, BeltramiValue mu_g) {
  check_consistent(k_f, mu_f, "f");
  check_consistent(k_g, mu_g, "g");
  const double pairing = pairing_real_part(mu_f, mu_g);
  const double denom = (1.0 + std::norm(mu_f.value())) * (1.0 + std::norm(mu_g.value()));
  const double bracket = 1.0 - 4.0 * pairing / denom;
  // The bracket equals |1 - conj(mu_g) mu_f|^2 + |mu_f - mu_g|^2 over the
  // denominator, so the product is >= 1 up to rounding.
  return DistortionValue(std::max(1.0, k_f.value() * k_g.value() * bracket));
}

DistortionValue compose_distortion(BeltramiValue mu_f, BeltramiValue mu_g) {
  return compose_distortion(distortion_from_beltrami(mu_f), mu_f,
                            distortion_from_beltrami(mu_g), mu_g);
}

BeltramiValue perturbation_beltrami(const WirtingerPair& pair, ComplexValue eta) {
  if (!pair.finite() || !is_finite(eta)) {
    throw Error(ErrorKind::DegenerateBeltrami, "perturbation_beltrami: non-finite input");
  }
  if (std::abs(eta) * pair.gradient_norm() >= 1.0) {
    throw Error(ErrorKind::DegenerateBeltrami,
                "perturbation_beltrami: |eta| (|phi_z| + |phi_zbar|) must be < 1");
  }
  const ComplexValue denom = 1.0 + eta * pair.d_z;
  if (denom == ComplexValue{0.0, 0.0}) {
    throw Error(ErrorKind::DegenerateBeltrami, "perturbation_beltrami: 1 + eta phi_z = 0");
  }
  return BeltramiValue(eta * pair.d_zbar / denom);
}

double perturbation_jacobian(const WirtingerPair& pair, double t) {
  return perturbation_jacobian(pair, ComplexValue{t, 0.0});
}

double perturbation_jacobian(const WirtingerPair& pair, ComplexValue eta) {
  return std::norm(1.0 + eta * pair.d_z) - std::norm(eta) * std::norm(pair.d_zbar);
}

double pairing_real_part(BeltramiValue mu_f, BeltramiValue mu_g) {
  const ComplexValue a = mu_f.value();
  const ComplexValue b = mu_g.value();
  return a.real() * b.real() + a.imag() * b.imag();
}

BeltramiValue beltrami_of_map(const WirtingerPair& derivatives) {
  if (derivatives.d_z == ComplexValue{0.0, 0.0}) {
    throw Error(ErrorKind::DegenerateBeltrami, "beltrami_of_map: g_z vanishes");
  }
  return BeltramiValue(derivatives.d_zbar / derivatives.d_z);
}

}  // namespace edlab
