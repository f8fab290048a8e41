#pragma once

// Divergence certification for perturbations g = z + eta phi of the extended
// example, the complex-direction sweep, and the localization step that turns
// a general non-conformal map into such a perturbation.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "edlab/extended_field.hpp"
#include "edlab/test_function.hpp"

namespace edlab {

/// Case of the proof: 1 when phi_zbar vanishes (or eta = 0), 2 when the real
/// part of e^{i alpha} phi_zbar carries the sign, 3 for the imaginary part.
enum class PerturbationCase { Unperturbed = 1, RealPart = 2, ImaginaryPart = 3 };

/// Sector-density constant of the construction.
inline constexpr double kSectorDensity = 1.0 / 32.0;

/// 1e-20, 1e-320, ... in log space: ten rungs reaching log(1/eps) ~ 6e3, deep
/// enough for exponents q within 0.3% of 1.
CutoffLadder default_campaign_ladder();

struct CampaignOptions {
  CutoffLadder ladder = default_campaign_ladder();
  /// Grid points per axis when scanning phi_zbar (odd, so the center is hit).
  std::size_t scan_grid = 161;
  /// Pointwise verification samples in D(z_k, r0).
  std::size_t samples = 4096;
  std::size_t density_samples = 20'000;
  std::uint64_t seed = 1;
  ProbeOptions probe;
};

struct PointwiseChecks {
  std::size_t samples = 0;
  /// Samples whose sector label equals the chosen tag.
  std::size_t tagged = 0;
  std::size_t pairing_violations = 0;
  std::size_t composition_violations = 0;
  std::size_t jacobian_violations = 0;
  double min_jacobian = 0.0;
  /// min over tagged samples of K(g(z), f o g^{-1}) / K(z, f).
  double min_composition_ratio = 0.0;
  double density = 0.0;
  double density_half_width = 0.0;
  bool passed = false;
};

struct DivergenceCertificate {
  PerturbationCase perturbation_case = PerturbationCase::Unperturbed;
  std::size_t center_index = 0;
  ComplexValue center{};
  double r0 = 0.0;
  SectorTag tag = SectorTag::S1;
  double q = 1.0;
  double jacobian_floor = 1.0;
  /// min over D(z_k, r0) of the signed component of e^{i alpha} phi_zbar.
  double epsilon1 = 0.0;
  /// log of the constant pi delta c_t in front of the lower-bound integrand.
  double log_prefactor = 0.0;
  ProbeResult probe;
  PointwiseChecks checks;
  Classification verdict = Classification::Inconclusive;
  /// Finite verdicts: certified value of the radial bound.
  double energy = 0.0;
  std::string reason;
};

/// Lower-bound chain on D(z_k, r0): I(eps) = C int_eps^{r0} (e^p 2^{-k} F(r))^q r dr
/// with C = exp(log_prefactor); predicted slope 2 - 2q.
DivergenceCertificate certify_divergence(const ExtendedDistortionField& field, std::size_t k,
                                         double r0, double q, double log_prefactor,
                                         const CutoffLadder& ladder,
                                         const ProbeOptions& options = {});

/// Finite certificate for the unperturbed field, probing the radial majorant
/// H(r) = 2 pi e^p sum_k 2^{-k} F(r) [r < d_k] on (0, 1).
DivergenceCertificate certify_unperturbed(const ExtendedDistortionField& field,
                                          const CutoffLadder& ladder,
                                          const ProbeOptions& options = {});

/// Runs the proof pipeline for g = z + eta phi. Requires |eta| * gradient_sup < 1.
/// Throws NoCenterFound when no enumerated center lies in the detected
/// neighbourhood.
DivergenceCertificate perturbed_energy_campaign(const ExtendedDistortionField& field,
                                                const TestFunction& phi, ComplexValue eta,
                                                const CampaignOptions& options = {});

struct SweepResult {
  std::vector<double> alphas;
  std::vector<DivergenceCertificate> certificates;
  double min_epsilon = 0.0;
  bool all_divergent = false;
};

/// Campaign for eta = magnitude e^{i alpha_j}, alpha_j = 2 pi j / angles.
/// Requires angles >= 16 and magnitude * gradient_sup < 1.
SweepResult alpha_sweep(const ExtendedDistortionField& field, const TestFunction& phi,
                        double magnitude, std::size_t angles,
                        const CampaignOptions& options = {});

struct Localization {
  ComplexValue z0{};
  double distortion = 1.0;
  /// Radius of the disk around z0 on which z + phi(z) = g(z).
  double plateau_radius = 0.0;
  TestFunction phi;
};

/// Scans an n x n grid of the disk for the largest distortion of g; throws
/// ConformalEverywhere if it stays below 1 + tol. Returns phi = chi (g - z)
/// with chi = 1 near z0.
Localization localize_nonconformality(const PlanarMap& g, double tol, std::size_t grid = 101);

std::string_view to_string(PerturbationCase c) noexcept;

}  // namespace edlab
