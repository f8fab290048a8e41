#include "edlab/radial_stretch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "edlab/error.hpp"
#include "edlab/quadrature.hpp"

namespace edlab {

namespace {

constexpr const char* kProfileSchema = "edlab.radial_profile";
constexpr int kProfileVersion = 1;
constexpr std::size_t kMaxNodes = std::size_t{1} << 20;

double distortion_sigma(double sigma) { return 1.0 + 2.0 * sigma - 2.0 * std::log(kLog2 + sigma); }

double stretch_derivative(double sigma) {
  const double k = distortion_sigma(sigma);
  const double dk = 2.0 - 2.0 / (kLog2 + sigma);
  return dk * stretch_ratio(sigma) / std::sqrt(k * k - 1.0);
}

double sigma_of(double r) {
  if (!(r > 0.0 && r <= 1.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "radius must lie in (0, 1], got " << r;
    throw Error(ErrorKind::Domain, os.str());
  }
  return -std::log(r);
}

// Quintic Hermite basis on [0, 1] matching value, first and second derivative.
struct Hermite {
  double f_a, d_a, dd_a, f_b, d_b, dd_b, h;

  double value(double t) const {
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    const double h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
    const double h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
    const double h2 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
    const double h3 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
    const double h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
    const double h5 = 0.5 * (t3 - 2.0 * t4 + t5);
    return f_a * h0 + h * d_a * h1 + h * h * dd_a * h2 + f_b * h3 + h * d_b * h4 +
           h * h * dd_b * h5;
  }

  double derivative(double t) const {
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
    const double h0 = -30.0 * t2 + 60.0 * t3 - 30.0 * t4;
    const double h1 = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4;
    const double h2 = 0.5 * (2.0 * t - 9.0 * t2 + 12.0 * t3 - 5.0 * t4);
    const double h3 = 30.0 * t2 - 60.0 * t3 + 30.0 * t4;
    const double h4 = -12.0 * t2 + 28.0 * t3 - 15.0 * t4;
    const double h5 = 0.5 * (3.0 * t2 - 8.0 * t3 + 5.0 * t4);
    return (f_a * h0 + h * d_a * h1 + h * h * dd_a * h2 + f_b * h3 + h * d_b * h4 +
            h * h * dd_b * h5) /
           h;
  }
};

Hermite cell(const std::vector<double>& sigma, const std::vector<double>& log_rho, std::size_t i) {
  const double a = sigma[i];
  const double b = sigma[i + 1];
  return {log_rho[i],     -stretch_ratio(a), -stretch_derivative(a),
          log_rho[i + 1], -stretch_ratio(b), -stretch_derivative(b),
          b - a};
}

// Index i with sigma[i] <= s <= sigma[i + 1]; requires sigma[0] <= s <= sigma.back().
std::size_t find_cell(const std::vector<double>& sigma, double s) {
  const auto it = std::upper_bound(sigma.begin(), sigma.end(), s);
  const auto i = static_cast<std::size_t>(std::distance(sigma.begin(), it));
  return std::min(i == 0 ? 0 : i - 1, sigma.size() - 2);
}

double integrate_stretch(double a, double b, double abs_tol, double rel_tol) {
  return integrate_interval(stretch_ratio, a, b, abs_tol, rel_tol).value;
}

struct Table {
  std::vector<double> sigma;
  std::vector<double> log_rho;
  double worst_midpoint = 0.0;
};

Table tabulate(double tol, std::size_t nodes, double inner_radius) {
  const double sigma_max = -std::log(inner_radius);
  const double cell_tol = tol / static_cast<double>(nodes);
  Table table;
  table.sigma.resize(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double s = sigma_max * static_cast<double>(i) / static_cast<double>(nodes - 1);
    // Snap to the value an importer recomputes from the exported radius.
    table.sigma[i] = -std::log(std::exp(-s));
  }
  table.sigma.front() = 0.0;
  std::vector<double> pieces(nodes - 1);
  for (std::size_t i = 0; i + 1 < nodes; ++i) {
    pieces[i] = integrate_stretch(table.sigma[i], table.sigma[i + 1], cell_tol, 0.0);
  }
  table.log_rho.resize(nodes);
  table.log_rho[0] = 0.0;
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t i = 0; i + 1 < nodes; ++i) {
    const double t = sum + pieces[i];
    carry += std::abs(sum) >= std::abs(pieces[i]) ? (sum - t) + pieces[i] : (pieces[i] - t) + sum;
    sum = t;
    table.log_rho[i + 1] = -(sum + carry);
  }
  for (std::size_t i = 0; i + 1 < nodes; ++i) {
    const double mid = 0.5 * (table.sigma[i] + table.sigma[i + 1]);
    const double direct =
        table.log_rho[i] - integrate_stretch(table.sigma[i], mid, cell_tol, 0.0);
    const double interpolated = cell(table.sigma, table.log_rho, i).value(0.5);
    table.worst_midpoint = std::max(table.worst_midpoint, std::abs(direct - interpolated));
  }
  return table;
}

}  // namespace

double profile_F(double r) {
  const double s = sigma_of(r);
  const double u = kLog2 + s;
  return 1.0 / (r * r * u * u);
}

DistortionValue basic_distortion(double r) {
  if (!(r > 0.0 && r < 1.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "basic_distortion: radius must lie in (0, 1), got " << r;
    throw Error(ErrorKind::Domain, os.str());
  }
  return DistortionValue(1.0 - 2.0 * std::log(r * std::log(2.0 / r)));
}

double stretch_ratio(double sigma) {
  const double k = distortion_sigma(sigma);
  return k + std::sqrt(k * k - 1.0);
}

RadialProfile::RadialProfile(std::vector<double> sigma, std::vector<double> log_rho, double tol)
    : sigma_(std::move(sigma)), log_rho_(std::move(log_rho)), tol_(tol) {
  locate_vanishing_radius();
}

std::vector<double> RadialProfile::grid() const {
  std::vector<double> r(sigma_.size());
  for (std::size_t i = 0; i < sigma_.size(); ++i) r[sigma_.size() - 1 - i] = std::exp(-sigma_[i]);
  return r;
}

std::vector<double> RadialProfile::log_rho_values() const {
  return {log_rho_.rbegin(), log_rho_.rend()};
}

double RadialProfile::log_rho_sigma(double sigma) const {
  if (sigma > sigma_.back()) return log_rho_tail(sigma);
  const std::size_t i = find_cell(sigma_, sigma);
  if (sigma == sigma_[i]) return log_rho_[i];
  const double t = (sigma - sigma_[i]) / (sigma_[i + 1] - sigma_[i]);
  return cell(sigma_, log_rho_, i).value(t);
}

double RadialProfile::log_rho_tail(double sigma) const {
  return log_rho_.back() - integrate_stretch(sigma_.back(), sigma, 0.0, 1e-12);
}

double RadialProfile::log_rho(double r) const {
  if (r == 0.0) return -std::numeric_limits<double>::infinity();
  return log_rho_sigma(sigma_of(r));
}

double RadialProfile::rho(double r) const { return std::exp(log_rho(r)); }

double RadialProfile::stretch(double r) const { return stretch_ratio(sigma_of(r)); }

double RadialProfile::rho_dot(double r) const { return rho(r) * stretch(r) / r; }

double RadialProfile::interpolated_stretch(double r) const {
  const double s = sigma_of(r);
  if (s > sigma_.back()) return stretch_ratio(s);
  const std::size_t i = find_cell(sigma_, s);
  const double t = (s - sigma_[i]) / (sigma_[i + 1] - sigma_[i]);
  return -cell(sigma_, log_rho_, i).derivative(t);
}

void RadialProfile::locate_vanishing_radius() {
  const double target = -1.0 / tol_;
  double lo = 0.0;
  double hi = std::max(1.0, sigma_.back());
  while (log_rho_sigma(hi) >= target) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (log_rho_sigma(mid) < target ? hi : lo) = mid;
  }
  vanishing_log_r_ = -hi;
}

std::string RadialProfile::to_json() const {
  nlohmann::json j;
  j["schema"] = kProfileSchema;
  j["version"] = kProfileVersion;
  j["tol"] = tol_;
  j["grid"] = grid();
  j["log_rho"] = log_rho_values();
  return j.dump();
}

RadialProfile RadialProfile::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, std::string("profile JSON: ") + e.what());
  }
  try {
    if (j.at("schema").get<std::string>() != kProfileSchema ||
        j.at("version").get<int>() != kProfileVersion) {
      throw Error(ErrorKind::Format, "profile JSON: unsupported schema or version");
    }
    const auto tol = j.at("tol").get<double>();
    const auto r = j.at("grid").get<std::vector<double>>();
    const auto values = j.at("log_rho").get<std::vector<double>>();
    if (r.size() < 2 || r.size() != values.size() || !(tol > 0.0)) {
      throw Error(ErrorKind::Format, "profile JSON: grid and log_rho must match, tol > 0");
    }
    if (r.back() != 1.0 || values.back() != 0.0) {
      throw Error(ErrorKind::Format, "profile JSON: profile must end at r = 1 with log rho = 0");
    }
    std::vector<double> sigma(r.size());
    std::vector<double> log_rho(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (!(r[i] > 0.0) || (i > 0 && !(r[i] > r[i - 1])) || (i > 0 && values[i] < values[i - 1])) {
        throw Error(ErrorKind::Format, "profile JSON: grid and log_rho must increase");
      }
      sigma[r.size() - 1 - i] = -std::log(r[i]);
      log_rho[r.size() - 1 - i] = values[i];
    }
    return RadialProfile(std::move(sigma), std::move(log_rho), tol);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, std::string("profile JSON: ") + e.what());
  }
}

RadialProfile build_profile(double tol, std::size_t nodes, double inner_radius) {
  if (!(tol > 0.0)) throw Error(ErrorKind::Precondition, "build_profile: tol must be positive");
  if (nodes < 2) throw Error(ErrorKind::Precondition, "build_profile: need at least 2 nodes");
  if (!(inner_radius > 0.0 && inner_radius < 1.0)) {
    throw Error(ErrorKind::Precondition, "build_profile: inner radius must lie in (0, 1)");
  }
  for (std::size_t n = nodes; n <= kMaxNodes; n *= 2) {
    Table table = tabulate(tol, n, inner_radius);
    if (table.worst_midpoint <= tol) {
      return RadialProfile(std::move(table.sigma), std::move(table.log_rho), tol);
    }
  }
  throw Error(ErrorKind::QuadratureFailure, "build_profile: grid refinement did not converge");
}

ComplexValue radial_map(ComplexValue z, const RadialProfile& profile) {
  const double r = std::abs(z);
  if (r == 0.0) return {0.0, 0.0};
  return (z / r) * profile.rho(r);
}

BeltramiValue radial_beltrami(ComplexValue z, const RadialProfile& profile) {
  const double r = std::abs(z);
  if (!(r > 0.0 && r < 1.0)) {
    throw Error(ErrorKind::Domain, "radial_beltrami: need 0 < |z| < 1");
  }
  const double g = profile.stretch(r);
  return BeltramiValue((z * z / (r * r)) * ((g - 1.0) / (g + 1.0)));
}

double dirichlet_energy_probe(const RadialProfile& profile, double eps, double radius, double tol) {
  if (!(eps > 0.0 && eps <= radius && radius < 1.0)) {
    throw Error(ErrorKind::Domain, "dirichlet_energy_probe: need 0 < eps <= R < 1");
  }
  if (eps == radius) return 0.0;
  // (rho'^2 + rho^2 / r^2) r dr = rho^2 (g^2 + 1) dsigma
  auto integrand = [&profile](double sigma) {
    const double g = stretch_ratio(sigma);
    return std::exp(2.0 * profile.log_rho(std::exp(-sigma))) * (g * g + 1.0);
  };
  return 2.0 * kPi *
         integrate_interval(integrand, -std::log(radius), -std::log(eps), 0.0, tol).value;
}

DirichletSequence dirichlet_energy_sequence(const RadialProfile& profile,
                                            const std::vector<double>& eps, double radius,
                                            double tol) {
  if (eps.empty()) throw Error(ErrorKind::Precondition, "dirichlet sequence: no cutoffs");
  DirichletSequence out;
  out.eps = eps;
  out.energies.push_back(dirichlet_energy_probe(profile, eps[0], radius, tol));
  out.increasing = true;
  out.increments_decreasing = true;
  double worst_ratio = 0.0;
  for (std::size_t i = 1; i < eps.size(); ++i) {
    if (!(eps[i] < eps[i - 1])) {
      throw Error(ErrorKind::Precondition, "dirichlet sequence: cutoffs must decrease");
    }
    const double inc = dirichlet_energy_probe(profile, eps[i], eps[i - 1], tol);
    out.increments.push_back(inc);
    out.energies.push_back(out.energies.back() + inc);
    if (!(inc > 0.0)) out.increasing = false;
    if (out.increments.size() > 1) {
      const double prev = out.increments[out.increments.size() - 2];
      if (inc > prev) out.increments_decreasing = false;
      worst_ratio = std::max(worst_ratio, prev > 0.0 ? inc / prev : 1.0);
    }
  }
  const double last = out.increments.empty() ? 0.0 : out.increments.back();
  out.limit_bound = worst_ratio < 1.0 ? out.energies.back() + last * worst_ratio / (1.0 - worst_ratio)
                                      : std::numeric_limits<double>::infinity();
  out.cauchy = out.increasing && out.increments_decreasing && std::isfinite(out.limit_bound) &&
               out.increments.size() >= 2;
  return out;
}

}  // namespace edlab
