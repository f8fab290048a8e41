#include "edlab/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "edlab/error.hpp"
#include "edlab/parallel.hpp"

namespace edlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// q is placed this fraction of the way from 1 to the sampled 1st percentile of K(z, g).
constexpr double kQuantileMargin = 0.99;
constexpr double kQuantile = 0.01;

DivergenceCertificate unperturbed_case(const ExtendedDistortionField& field,
                                       const CampaignOptions& options, std::string reason) {
  DivergenceCertificate cert = certify_unperturbed(field, options.ladder, options.probe);
  cert.reason = std::move(reason);
  return cert;
}

// True when sign * component >= floor at the center and on a polar grid of D(c, radius).
template <class Component>
bool holds_on_disk(const Component& component, ComplexValue c, double radius, double sign,
                   double floor) {
  constexpr int kRadii = 24;
  constexpr int kAngles = 48;
  if (sign * component(c) < floor) return false;
  for (int i = 1; i <= kRadii; ++i) {
    const double rho = radius * i / kRadii;
    for (int j = 0; j < kAngles; ++j) {
      const ComplexValue z = c + std::polar(rho, 2.0 * kPi * j / kAngles);
      if (std::norm(z) >= 1.0 || sign * component(z) < floor) return false;
    }
  }
  return true;
}

}  // namespace

std::string_view to_string(PerturbationCase c) noexcept {
  switch (c) {
    case PerturbationCase::Unperturbed: return "1";
    case PerturbationCase::RealPart: return "2";
    case PerturbationCase::ImaginaryPart: return "3";
  }
  return "1";
}

CutoffLadder default_campaign_ladder() { return CutoffLadder::geometric(1e-20, 1e-300, 10); }

DivergenceCertificate certify_divergence(const ExtendedDistortionField& field, std::size_t k,
                                         double r0, double q, double log_prefactor,
                                         const CutoffLadder& ladder,
                                         const ProbeOptions& options) {
  if (!(q > 1.0)) throw Error(ErrorKind::Precondition, "certify_divergence: need q > 1");
  if (k < 1 || k > field.terms()) {
    throw Error(ErrorKind::Precondition, "certify_divergence: center index out of range");
  }
  if (!(r0 > 0.0 && r0 <= 1.0) || !(ladder.log_eps().front() < std::log(r0))) {
    throw Error(ErrorKind::Precondition, "certify_divergence: ladder must lie inside (0, r0)");
  }
  DivergenceCertificate cert;
  cert.center_index = k;
  cert.center = field.center(k);
  cert.r0 = r0;
  cert.q = q;
  cert.log_prefactor = log_prefactor;
  // C (e^p 2^{-k} F)^q = (s F)^q with log s = log C / q + p - k log 2
  const double log_scale = log_prefactor / q + field.p() + field.log_weight(k);
  cert.probe = divergence_probe(RadialFunction::f_power(q, log_scale), ladder, r0, 2.0 - 2.0 * q,
                                options);
  cert.verdict = cert.probe.estimate.classification;
  return cert;
}

DivergenceCertificate certify_unperturbed(const ExtendedDistortionField& field,
                                          const CutoffLadder& ladder,
                                          const ProbeOptions& options) {
  // W(r) = sum of weights with d_k > r, via reaches sorted in decreasing order.
  std::vector<std::pair<double, double>> reach;
  for (std::size_t k = 1; k <= field.terms(); ++k) {
    reach.emplace_back(field.boundary_distance(k), std::exp(field.log_weight(k)));
  }
  std::sort(reach.begin(), reach.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<double> reach_values;
  std::vector<double> prefix;
  double acc = 0.0;
  for (const auto& [d, w] : reach) {
    acc += w;
    reach_values.push_back(d);
    prefix.push_back(acc);
  }
  const double log_front = std::log(2.0 * kPi) + field.p();
  auto log_r2h = [reach_values, prefix, log_front](double l) {
    const double r = std::exp(l);
    // Count of reaches strictly greater than r.
    const auto it = std::partition_point(reach_values.begin(), reach_values.end(),
                                         [r](double d) { return d > r; });
    const auto n = static_cast<std::size_t>(std::distance(reach_values.begin(), it));
    if (n == 0) return -kInf;
    return log_front + std::log(prefix[n - 1]) - 2.0 * std::log(kLog2 - l);
  };
  DivergenceCertificate cert;
  cert.perturbation_case = PerturbationCase::Unperturbed;
  cert.probe = divergence_probe(RadialFunction::from_log_weighted(log_r2h, 2.0), ladder, 1.0, 0.0,
                                options);
  cert.verdict = cert.probe.estimate.classification;
  cert.energy = cert.probe.extrapolated;
  cert.checks.passed = true;
  return cert;
}

DivergenceCertificate perturbed_energy_campaign(const ExtendedDistortionField& field,
                                                const TestFunction& phi, ComplexValue eta,
                                                const CampaignOptions& options) {
  if (!is_finite(eta) || std::abs(eta) * phi.gradient_sup() >= 1.0) {
    throw Error(ErrorKind::Precondition, "campaign: need |eta| * gradient sup < 1");
  }
  if (std::abs(eta) == 0.0) return unperturbed_case(field, options, "eta = 0");

  // (i) locate the dominant component of e^{i alpha} phi_zbar.
  const ComplexValue rotation = eta / std::abs(eta);
  const std::size_t n = options.scan_grid | 1;
  const ComplexValue c = phi.center();
  const double s = phi.support_radius();
  double best_re = 0.0, best_im = 0.0;
  ComplexValue at_re = c, at_im = c;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const ComplexValue z = c + s * ComplexValue(-1.0 + 2.0 * i / (n - 1), -1.0 + 2.0 * j / (n - 1));
      if (!phi.in_support(z) || std::norm(z) >= 1.0) continue;
      const ComplexValue w = rotation * phi.wirtinger(z).d_zbar;
      if (std::abs(w.real()) > best_re) {
        best_re = std::abs(w.real());
        at_re = z;
      }
      if (std::abs(w.imag()) > best_im) {
        best_im = std::abs(w.imag());
        at_im = z;
      }
    }
  }
  if (best_re == 0.0 && best_im == 0.0) {
    return unperturbed_case(field, options, "phi_zbar vanishes on the scan grid");
  }
  bool use_real = best_re >= best_im;
  const ComplexValue peak_at = use_real ? at_re : at_im;
  const double peak = use_real ? best_re : best_im;
  auto component = [&](ComplexValue z) {
    const ComplexValue w = rotation * phi.wirtinger(z).d_zbar;
    return use_real ? w.real() : w.imag();
  };
  double sign = component(peak_at) > 0.0 ? 1.0 : -1.0;

  // Largest dyadic fraction of the room around `at` on which sign * component >= floor.
  auto largest_radius = [&](ComplexValue at, double floor) {
    const double limit = std::min(s - std::abs(at - c), 1.0 - std::abs(at));
    for (int j = 1; j <= 40; ++j) {
      const double candidate = std::ldexp(limit, -j);
      if (holds_on_disk(component, at, candidate, sign, floor)) return candidate;
    }
    return 0.0;
  };
  // Neighbourhood U = D(peak_at, u) where sign * component >= peak / 2.
  const double u = largest_radius(peak_at, 0.5 * peak);

  // (ii) lowest-index center inside U.
  std::size_t k = 0;
  double r_avail = 0.0;
  for (std::size_t i = 1; i <= field.terms() && k == 0 && u > 0.0; ++i) {
    const double d = std::abs(field.center(i) - peak_at);
    if (d < u) {
      k = i;
      r_avail = u - d;
    }
  }
  // Otherwise the lowest-index center in the support where some signed
  // component is positive, with U around the center itself.
  for (std::size_t i = 1; i <= field.terms() && k == 0; ++i) {
    const ComplexValue z = field.center(i);
    if (!phi.in_support(z)) continue;
    const ComplexValue w = rotation * phi.wirtinger(z).d_zbar;
    if (w == ComplexValue{}) continue;
    use_real = std::abs(w.real()) >= std::abs(w.imag());
    const double value = use_real ? w.real() : w.imag();
    sign = value > 0.0 ? 1.0 : -1.0;
    const double radius = largest_radius(z, 0.5 * std::abs(value));
    if (radius > 0.0) {
      k = i;
      r_avail = radius;
    }
  }
  if (k == 0) {
    throw Error(ErrorKind::NoCenterFound,
                "campaign: no enumerated center within the neighbourhood; raise max_level or K_max");
  }
  const DyadicCenter& center = field.system().center(k);
  const double r0 = std::min(0.5 * center.radius(), r_avail);

  // (iii) the sector whose pairing has a negative leading term.
  SectorTag tag;
  if (use_real) {
    tag = sign > 0.0 ? SectorTag::S2 : SectorTag::S1;
  } else {
    tag = sign > 0.0 ? SectorTag::S4 : SectorTag::S3;
  }

  // (iv) q, Jacobian floor and pointwise verification on D(z_k, r0).
  const double jacobian_floor = std::pow(1.0 - std::abs(eta) * phi.gradient_sup(), 2);
  PointwiseChecks checks;
  checks.min_jacobian = kInf;
  checks.min_composition_ratio = kInf;
  std::vector<double> k_g;
  double epsilon1 = sign * component(field.center(k));
  struct Sample {
    ComplexValue z;
    BeltramiValue mu_g;
    DistortionValue k_g;
  };
  std::vector<Sample> tagged;
  for (std::size_t i = 0; i < options.samples; ++i) {
    const double rho = r0 * std::sqrt(counter_uniform(options.seed, 2 * i));
    const double theta = 2.0 * kPi * counter_uniform(options.seed, 2 * i + 1);
    if (rho == 0.0) continue;
    const ComplexValue z = field.center(k) + std::polar(rho, theta);
    const WirtingerPair w = phi.wirtinger(z);
    const BeltramiValue mu_g = perturbation_beltrami(w, eta);
    const DistortionValue kg = distortion_from_beltrami(mu_g);
    const double jac = perturbation_jacobian(w, eta);
    ++checks.samples;
    k_g.push_back(kg.value());
    epsilon1 = std::min(epsilon1, sign * component(z));
    checks.min_jacobian = std::min(checks.min_jacobian, jac);
    if (jac < jacobian_floor) ++checks.jacobian_violations;
    if (classify(z, field.system()).tag == tag) tagged.push_back({z, mu_g, kg});
  }
  std::sort(k_g.begin(), k_g.end());
  const double quantile =
      k_g[static_cast<std::size_t>(kQuantile * static_cast<double>(k_g.size() - 1))];
  const double q = 1.0 + kQuantileMargin * (quantile - 1.0);

  checks.tagged = tagged.size();
  for (const Sample& sample : tagged) {
    const FieldValue f = extended_distortion(sample.z, field);
    const BeltramiValue mu_f(beltrami_modulus_from_distortion(f.k) * sector_phase(tag));
    if (pairing_real_part(mu_f, sample.mu_g) > 0.0) ++checks.pairing_violations;
    const double composed = compose_distortion(f.k, mu_f, sample.k_g, sample.mu_g).value();
    const double ratio = composed / f.k.value();
    checks.min_composition_ratio = std::min(checks.min_composition_ratio, ratio);
    if (sample.k_g.value() >= q && ratio < q * (1.0 - 1e-12)) ++checks.composition_violations;
  }
  const auto densities = density_estimates(field.system(), center, r0, options.density_samples,
                                           options.seed);
  const DensityEstimate& density = densities[static_cast<std::size_t>(tag)];
  checks.density = density.ratio;
  checks.density_half_width = density.half_width;
  checks.passed = q > 1.0 && checks.tagged > 0 && checks.pairing_violations == 0 &&
                  checks.composition_violations == 0 && checks.jacobian_violations == 0 &&
                  density.lower() >= kSectorDensity;

  // (v) the divergence certificate itself.
  DivergenceCertificate cert;
  const double log_prefactor = std::log(kPi * kSectorDensity * jacobian_floor);
  if (q > 1.0) {
    cert = certify_divergence(field, k, r0, q, log_prefactor, options.ladder, options.probe);
  } else {
    cert.center_index = k;
    cert.center = field.center(k);
    cert.r0 = r0;
    cert.q = q;
    cert.log_prefactor = log_prefactor;
  }
  cert.perturbation_case = use_real ? PerturbationCase::RealPart : PerturbationCase::ImaginaryPart;
  cert.tag = tag;
  cert.jacobian_floor = jacobian_floor;
  cert.epsilon1 = epsilon1;
  cert.checks = checks;
  if (!checks.passed) {
    cert.verdict = Classification::Inconclusive;
    std::ostringstream os;
    os << "pointwise checks failed: q=" << q << " tagged=" << checks.tagged
       << " pairing=" << checks.pairing_violations
       << " composition=" << checks.composition_violations
       << " jacobian=" << checks.jacobian_violations << " density=" << density.lower();
    cert.reason = os.str();
  }
  return cert;
}

SweepResult alpha_sweep(const ExtendedDistortionField& field, const TestFunction& phi,
                        double magnitude, std::size_t angles, const CampaignOptions& options) {
  if (angles < 16) throw Error(ErrorKind::Precondition, "alpha_sweep: need at least 16 angles");
  if (!(magnitude >= 0.0) || magnitude * phi.gradient_sup() >= 1.0) {
    throw Error(ErrorKind::Precondition, "alpha_sweep: need 0 <= magnitude * gradient sup < 1");
  }
  SweepResult out;
  out.certificates.resize(angles);
  for (std::size_t j = 0; j < angles; ++j) {
    out.alphas.push_back(2.0 * kPi * static_cast<double>(j) / static_cast<double>(angles));
  }
  parallel_for_index(angles, [&](std::size_t j) {
    out.certificates[j] =
        perturbed_energy_campaign(field, phi, std::polar(magnitude, out.alphas[j]), options);
  });
  out.min_epsilon = kInf;
  out.all_divergent = true;
  for (const DivergenceCertificate& cert : out.certificates) {
    out.min_epsilon = std::min(out.min_epsilon, cert.epsilon1);
    if (cert.verdict != Classification::Divergent) out.all_divergent = false;
  }
  return out;
}

Localization localize_nonconformality(const PlanarMap& g, double tol, std::size_t grid) {
  if (!(tol > 0.0)) throw Error(ErrorKind::Precondition, "localize: tol must be positive");
  const std::size_t n = grid | 1;
  double best = 1.0;
  ComplexValue z0{};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const ComplexValue z(-1.0 + 2.0 * i / (n - 1), -1.0 + 2.0 * j / (n - 1));
      if (std::norm(z) >= 1.0) continue;
      const double k = distortion_from_beltrami(beltrami_of_map(g.derivatives(z))).value();
      if (k > best) {
        best = k;
        z0 = z;
      }
    }
  }
  if (!(best >= 1.0 + tol)) {
    std::ostringstream os;
    os << "localize: distortion stays below 1 + " << tol << " on the " << n << "x" << n
       << " grid; g is numerically conformal";
    throw Error(ErrorKind::ConformalEverywhere, os.str());
  }
  const double inner = std::min(0.05, 0.25 * (1.0 - std::abs(z0)));
  const TestFunction chi = TestFunction::plateau(z0, inner, 2.0 * inner);
  return {z0, best, inner, localized_perturbation(g, chi)};
}

}  // namespace edlab
