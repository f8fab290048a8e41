#include "edlab/extended_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "edlab/error.hpp"
#include "edlab/parallel.hpp"

namespace edlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log F(r) for 0 < r < 2.
double log_F(double r) {
  const double l = std::log(r);
  return -2.0 * l - 2.0 * std::log(kLog2 - l);
}

double log_add_exp(double x, double y) {
  if (x == -kInf) return y;
  if (y == -kInf) return x;
  const double hi = std::max(x, y);
  return hi + std::log1p(std::exp(std::min(x, y) - hi));
}

// Largest log-contribution any omitted center could add at z.
double omitted_log_bound(ComplexValue z, const ExtendedDistortionField& field) {
  const SectorSystem& system = field.system();
  double bound = -kInf;
  for (int n = 1; n <= system.max_level(); ++n) {
    const DyadicCenter* c = system.nearest_center(n, z);
    if (c == nullptr || c->index <= field.terms()) continue;
    const double dist = std::abs(z - c->point());
    if (dist == 0.0) return kInf;
    if (dist < c->boundary_distance()) {
      bound = std::max(bound, -static_cast<double>(c->index) * kLog2 + log_F(dist));
    }
  }
  const double next = system.next_level_distance(z);
  if (next == 0.0) return kInf;
  if (next < 1.0) {
    const auto weight_index = static_cast<double>(system.centers().size() + 1);
    bound = std::max(bound, -weight_index * kLog2 + log_F(next));
  }
  return bound;
}

}  // namespace

ExtendedDistortionField::ExtendedDistortionField(double p,
                                                 std::shared_ptr<const SectorSystem> system,
                                                 std::size_t k_max, bool clamp)
    : p_(p), system_(std::move(system)), k_max_(k_max), clamp_(clamp) {
  if (!(p_ > 0.0) || !std::isfinite(p_)) {
    throw Error(ErrorKind::Precondition, "extended field: p must be positive");
  }
  if (!system_) throw Error(ErrorKind::Precondition, "extended field: missing sector system");
  if (k_max_ < 1) throw Error(ErrorKind::Precondition, "extended field: K_max must be >= 1");
  const std::size_t n = std::min(k_max_, system_->centers().size());
  for (std::size_t k = 1; k <= n; ++k) {
    const DyadicCenter& c = system_->center(k);
    points_.push_back(c.point());
    reach_.push_back(c.boundary_distance());
    weights_.push_back(std::ldexp(1.0, -static_cast<int>(k)));
  }
}

double ExtendedDistortionField::log_weight(std::size_t k) const {
  return -static_cast<double>(k) * kLog2;
}

double ExtendedDistortionField::series(ComplexValue z) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double n = std::norm(z - points_[i]);
    if (n >= reach_[i] * reach_[i]) continue;
    if (n < 1e-200) return std::exp(log_series(z));
    const double u = kLog2 - 0.5 * std::log(n);
    acc += weights_[i] / (n * u * u);
  }
  return acc;
}

double ExtendedDistortionField::log_series(ComplexValue z) const {
  double acc = -kInf;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double r = std::abs(z - points_[i]);
    if (r == 0.0) return kInf;
    if (r < reach_[i]) acc = log_add_exp(acc, log_weight(i + 1) + log_F(r));
  }
  return acc;
}

FieldValue extended_distortion(ComplexValue z, const ExtendedDistortionField& field) {
  if (!(std::norm(z) < 1.0)) {
    throw Error(ErrorKind::Domain, "extended_distortion: need |z| < 1");
  }
  const double log_s = field.log_series(z);
  if (log_s == kInf) {
    std::ostringstream os;
    os.precision(17);
    os << "extended_distortion: z = (" << z.real() << ", " << z.imag() << ") is a center";
    throw Error(ErrorKind::SingularCenter, os.str());
  }
  FieldValue out;
  out.log_series = log_s;
  const double raw = 1.0 + log_s / field.p();
  if (raw < 1.0) {
    if (!field.clamp()) out.k = DistortionValue(raw);  // throws InvalidDistortion
    out.clamped = true;
    out.k = DistortionValue(1.0);
  } else {
    out.k = DistortionValue(raw);
  }
  const bool unresolved = classify(z, field.system()).tag == SectorTag::Unresolved;
  const double threshold = std::log(ExtendedDistortionField::kTruncationThreshold) +
                           std::max(log_s, 0.0);
  out.truncated = unresolved || omitted_log_bound(z, field) > threshold;
  return out;
}

ComplexValue sector_phase(SectorTag tag) {
  switch (tag) {
    case SectorTag::S1: return {1.0, 0.0};
    case SectorTag::S2: return {-1.0, 0.0};
    case SectorTag::S3: return {0.0, 1.0};
    default: return {0.0, -1.0};
  }
}

BeltramiValue extended_beltrami(ComplexValue z, const ExtendedDistortionField& field) {
  const SectorLabel label = classify(z, field.system());
  if (label.tag == SectorTag::Unresolved) {
    throw Error(ErrorKind::UnresolvedLabel,
                "extended_beltrami: sector label unresolved at this depth; raise max_level");
  }
  const FieldValue value = extended_distortion(z, field);
  const double modulus = beltrami_modulus_from_distortion(value.k);
  return BeltramiValue(modulus * sector_phase(label.tag));
}

double termwise_energy_bound(const ExtendedDistortionField& field) {
  std::vector<double> terms;
  for (std::size_t k = 1; k <= field.terms(); ++k) {
    terms.push_back(std::exp(field.log_weight(k)) * 2.0 * kPi /
                    std::log(2.0 / field.boundary_distance(k)));
  }
  return std::exp(field.p()) * compensated_sum(terms);
}

double series_energy_ceiling(double p) { return 2.0 * kPi * std::exp(p) / kLog2; }

EnergyEstimate extended_energy(const ExtendedDistortionField& field, double tol) {
  const double scale = std::exp(field.p());
  const std::size_t terms = field.terms();
  // Annuli of the clamp integral; fixed so the reduction order never changes.
  constexpr std::size_t kRings = 64;
  const std::size_t rings = field.clamp() ? kRings : 0;
  std::vector<IntegralEstimate> pieces(terms + rings);
  parallel_for_index(terms + rings, [&](std::size_t i) {
    if (i < terms) {
      const std::size_t k = i + 1;
      const double log_w = field.log_weight(k);
      DiskField term;
      term.log_weighted = [log_w](double log_rho, double) {
        return log_w - 2.0 * std::log(kLog2 - log_rho);
      };
      pieces[i] = integrate_disk(term, field.center(k), field.boundary_distance(k),
                                 tol * std::exp(log_w));
      return;
    }
    const std::size_t ring = i - terms;
    DiskField deficit;
    deficit.value = [&field](ComplexValue z) {
      const double s = field.series(z);
      return s >= 1.0 ? 0.0 : 1.0 - s;
    };
    DiskOptions options;
    options.inner_rel_tol = 1e-9;
    const double inner = static_cast<double>(ring) / static_cast<double>(rings);
    const double outer = static_cast<double>(ring + 1) / static_cast<double>(rings);
    pieces[i] = integrate_disk(deficit, {0.0, 0.0}, outer, tol / static_cast<double>(rings),
                               ring == 0 ? std::nullopt : std::optional<double>(inner), options);
  });
  std::vector<double> series_values;
  std::vector<double> clamp_values;
  std::vector<double> errors;
  std::size_t cells = 0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    (i < terms ? series_values : clamp_values).push_back(pieces[i].value);
    errors.push_back(pieces[i].error);
    cells += pieces[i].cells;
  }
  EnergyEstimate out;
  out.series_part = scale * compensated_sum(series_values);
  out.clamp_part = scale * compensated_sum(clamp_values);
  out.total = {out.series_part + out.clamp_part, scale * compensated_sum(errors), cells,
               Classification::Finite};
  return out;
}

double pairing_on_sector(const WirtingerPair& pair, ComplexValue eta, SectorTag tag,
                         double mu_modulus) {
  if (std::abs(eta) * pair.gradient_norm() >= 1.0) {
    throw Error(ErrorKind::Precondition,
                "pairing_on_sector: |eta| (|phi_z| + |phi_zbar|) must be < 1");
  }
  if (static_cast<int>(tag) > 3) {
    throw Error(ErrorKind::Precondition, "pairing_on_sector: tag must be S1..S4");
  }
  const ComplexValue lead = eta * pair.d_zbar;
  const ComplexValue cross = pair.d_zbar * std::conj(pair.d_z);
  const double eta2 = std::norm(eta);
  const double denom = std::norm(1.0 + eta * pair.d_z);
  const bool real_part = tag == SectorTag::S1 || tag == SectorTag::S2;
  const bool negative = tag == SectorTag::S2 || tag == SectorTag::S4;
  const double bracket = real_part ? lead.real() + eta2 * cross.real()
                                   : lead.imag() + eta2 * cross.imag();
  const double value = mu_modulus * bracket / denom;
  return negative ? -value : value;
}

}  // namespace edlab
