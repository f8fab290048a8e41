#pragma once

// Pointwise algebra of Beltrami coefficients and distortion.
//
// Everything here is a pure function of its arguments. A Beltrami
// coefficient mu = f_zbar / f_z of an orientation-preserving map satisfies
// |mu| < 1; the distortion K = (1 + |mu|^2) / (1 - |mu|^2) is then >= 1.

#include "edlab/complex.hpp"

namespace edlab {

/// Beltrami coefficient with |value| < 1 (strict).
class BeltramiValue {
 public:
  BeltramiValue() = default;
  /// Throws DegenerateBeltrami if |mu| >= 1 or mu is not finite.
  explicit BeltramiValue(ComplexValue mu);

  ComplexValue value() const noexcept { return mu_; }
  double modulus() const noexcept { return std::abs(mu_); }

 private:
  ComplexValue mu_{0.0, 0.0};
};

/// Pointwise distortion K >= 1.
class DistortionValue {
 public:
  DistortionValue() = default;
  /// Throws InvalidDistortion if k < 1 or k is NaN.
  explicit DistortionValue(double k);

  double value() const noexcept { return k_; }

 private:
  double k_ = 1.0;
};

/// Wirtinger derivatives (phi_z, phi_zbar) of a test function at one point.
struct WirtingerPair {
  ComplexValue d_z{0.0, 0.0};
  ComplexValue d_zbar{0.0, 0.0};

  bool finite() const { return is_finite(d_z) && is_finite(d_zbar); }
  double gradient_norm() const { return std::abs(d_z) + std::abs(d_zbar); }
};

/// Relative tolerance used by compose_distortion to detect K/mu drift.
inline constexpr double kConsistencyTolerance = 1e-9;

DistortionValue distortion_from_beltrami(BeltramiValue mu);

/// sqrt((K - 1) / (K + 1)); the inverse of distortion_from_beltrami on moduli.
double beltrami_modulus_from_distortion(DistortionValue k);

/// Distortion of f o g^{-1} at g(z):
///   K_f K_g [1 - 4 Re(mu_f conj(mu_g)) / ((1 + |mu_f|^2)(1 + |mu_g|^2))].
/// Throws InconsistentInputs when a supplied K disagrees with K(mu).
DistortionValue compose_distortion(DistortionValue k_f, BeltramiValue mu_f,
                                   DistortionValue k_g, BeltramiValue mu_g);

/// Convenience overload that derives both distortions from the coefficients.
DistortionValue compose_distortion(BeltramiValue mu_f, BeltramiValue mu_g);

/// Beltrami coefficient eta phi_zbar / (1 + eta phi_z) of g = z + eta phi.
/// Requires |eta| (|phi_z| + |phi_zbar|) < 1.
BeltramiValue perturbation_beltrami(const WirtingerPair& pair, ComplexValue eta);

/// Jacobian |1 + eta phi_z|^2 - |eta|^2 |phi_zbar|^2 of g = z + eta phi.
double perturbation_jacobian(const WirtingerPair& pair, double t);
double perturbation_jacobian(const WirtingerPair& pair, ComplexValue eta);

/// Re(mu_f conj(mu_g)).
double pairing_real_part(BeltramiValue mu_f, BeltramiValue mu_g);

/// Beltrami coefficient g_zbar / g_z of a map with the given derivatives.
BeltramiValue beltrami_of_map(const WirtingerPair& derivatives);

}  // namespace edlab
