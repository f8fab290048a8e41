#pragma once

// The series distortion field
//   K(z) = max(1, 1 + (1/p) log S(z)),
//   S(z) = sum_{k <= K_max} 2^{-k} F(|z - z_k|) [|z - z_k| < d_k],
// over the enumerated sector centers z_k with d_k = 1 - |z_k|, and the Beltrami
// coefficient whose phase is assigned by sector label.

#include <memory>
#include <vector>

#include "edlab/beltrami.hpp"
#include "edlab/quadrature.hpp"
#include "edlab/sector_system.hpp"

namespace edlab {

struct FieldValue {
  DistortionValue k;
  /// log S(z); -inf when no term is active.
  double log_series = 0.0;
  bool clamped = false;
  /// Deeper construction or omitted centers could change the value.
  bool truncated = false;
};

class ExtendedDistortionField {
 public:
  static constexpr std::size_t kDefaultKmax = 200;
  /// Relative contribution of omitted centers that raises the truncation flag.
  static constexpr double kTruncationThreshold = 1e-15;

  ExtendedDistortionField(double p, std::shared_ptr<const SectorSystem> system,
                          std::size_t k_max = kDefaultKmax, bool clamp = true);

  double p() const noexcept { return p_; }
  std::size_t k_max() const noexcept { return k_max_; }
  bool clamp() const noexcept { return clamp_; }
  const SectorSystem& system() const noexcept { return *system_; }
  std::shared_ptr<const SectorSystem> system_ptr() const noexcept { return system_; }

  /// Centers z_1 .. z_{K_max} (fewer if the system is smaller).
  std::size_t terms() const noexcept { return points_.size(); }
  ComplexValue center(std::size_t k) const { return points_.at(k - 1); }
  double boundary_distance(std::size_t k) const { return reach_.at(k - 1); }
  double log_weight(std::size_t k) const;

  /// log S(z); +inf when z is one of the centers.
  double log_series(ComplexValue z) const;
  /// S(z) in linear scale; may overflow to +inf very close to a center.
  double series(ComplexValue z) const;

 private:
  double p_;
  std::shared_ptr<const SectorSystem> system_;
  std::size_t k_max_;
  bool clamp_;
  std::vector<ComplexValue> points_;
  std::vector<double> reach_;
  std::vector<double> weights_;
};

/// K(z, f) with the truncation flag. Throws SingularCenter at a center and
/// Domain for |z| >= 1. Unclamped fields throw InvalidDistortion where S < 1.
FieldValue extended_distortion(ComplexValue z, const ExtendedDistortionField& field);

/// Phase-assigned Beltrami coefficient: |mu| = sqrt((K-1)/(K+1)) times +1 on
/// S1, -1 on S2, +i on S3 and -i elsewhere. Throws UnresolvedLabel when the
/// sector label is unresolved.
BeltramiValue extended_beltrami(ComplexValue z, const ExtendedDistortionField& field);

/// Unit phase for a sector label.
ComplexValue sector_phase(SectorTag tag);

/// e^p sum_k 2^{-k} 2 pi / log(2 / d_k).
double termwise_energy_bound(const ExtendedDistortionField& field);
/// 2 pi e^p / log 2.
double series_energy_ceiling(double p);

struct EnergyEstimate {
  IntegralEstimate total;
  /// e^p int S, summed per center.
  double series_part = 0.0;
  /// e^p int (1 - S)_+, the clamp contribution.
  double clamp_part = 0.0;
};

/// Quadrature of e^{pK} over the unit disk, split as e^p (S + (1 - S)_+).
EnergyEstimate extended_energy(const ExtendedDistortionField& field, double tol = 1e-6);

/// Re(mu_f conj(mu_g)) for mu_f = |mu| * sector_phase(tag) and
/// mu_g = eta phi_zbar / (1 + eta phi_z):
///   +-|mu| (Re(eta phi_zbar) + |eta|^2 Re(phi_zbar conj(phi_z))) / |1 + eta phi_z|^2 on S1/S2,
///   +-|mu| (Im(eta phi_zbar) + |eta|^2 Im(phi_zbar conj(phi_z))) / |1 + eta phi_z|^2 on S3/S4.
double pairing_on_sector(const WirtingerPair& pair, ComplexValue eta, SectorTag tag,
                         double mu_modulus);

}  // namespace edlab
