#include "edlab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

#include "edlab/error.hpp"

namespace edlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Cell {
  double a;
  double b;
  double value;
  double error;
  double abs_value;
};

Cell gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double abs_sum = std::abs(fc) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    abs_sum += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  Cell cell{a, b, kronrod * half, std::abs((kronrod - gauss) * half), abs_sum * std::abs(half)};
  if (!std::isfinite(cell.value) || !std::isfinite(cell.error)) {
    std::ostringstream os;
    os.precision(17);
    os << "non-finite integrand on [" << a << ", " << b << "]";
    throw Error(ErrorKind::QuadratureFailure, os.str());
  }
  return cell;
}

// Heap order: largest error first; ties broken by position for determinism.
bool cell_less(const Cell& x, const Cell& y) {
  if (x.error != y.error) return x.error < y.error;
  return x.a > y.a;
}

IntegralEstimate integrate_impl(const std::function<double(double)>& f, double a, double b,
                                double abs_tol, double rel_tol, std::size_t max_cells,
                                bool clamp_to_roundoff) {
  if (!(a < b)) {
    if (a == b) return {0.0, 0.0, 0, Classification::Finite};
    throw Error(ErrorKind::Domain, "integrate_interval: need a <= b");
  }
  std::vector<Cell> heap;
  heap.push_back(gauss_kronrod(f, a, b));
  double total = heap.front().value;
  double total_error = heap.front().error;
  double total_abs = heap.front().abs_value;

  auto target = [&] { return std::max(abs_tol, rel_tol * std::abs(total)); };
  auto floor = [&] { return 50.0 * kEps * total_abs; };

  while (total_error > target()) {
    if (target() < floor()) {
      if (clamp_to_roundoff && total_error <= 2.0 * floor()) break;
      if (!clamp_to_roundoff) {
        std::ostringstream os;
        os << "requested tolerance " << target() << " is below the roundoff floor " << floor();
        throw Error(ErrorKind::QuadratureFailure, os.str());
      }
    }
    if (heap.size() >= max_cells) {
      std::ostringstream os;
      os << "cell budget of " << max_cells << " exhausted with error " << total_error;
      throw Error(ErrorKind::QuadratureFailure, os.str());
    }
    std::pop_heap(heap.begin(), heap.end(), cell_less);
    const Cell worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        worst.b - worst.a <= 8.0 * kEps * std::max(std::abs(worst.a), std::abs(worst.b))) {
      if (clamp_to_roundoff) {
        heap.push_back(worst);
        std::push_heap(heap.begin(), heap.end(), cell_less);
        break;
      }
      throw Error(ErrorKind::QuadratureFailure, "cell width reached machine resolution");
    }
    const Cell left = gauss_kronrod(f, worst.a, mid);
    const Cell right = gauss_kronrod(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    total_abs += left.abs_value + right.abs_value - worst.abs_value;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), cell_less);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), cell_less);
  }

  // Fixed summation order (left to right) so results do not depend on the
  // refinement history beyond the final partition.
  std::sort(heap.begin(), heap.end(), [](const Cell& x, const Cell& y) { return x.a < y.a; });
  std::vector<double> values(heap.size());
  std::vector<double> errors(heap.size());
  for (std::size_t i = 0; i < heap.size(); ++i) {
    values[i] = heap[i].value;
    errors[i] = heap[i].error;
  }
  return {compensated_sum(values), compensated_sum(errors), heap.size(), Classification::Finite};
}

double log_add_exp(double x, double y) {
  if (x == -kInf) return y;
  if (y == -kInf) return x;
  const double hi = std::max(x, y);
  return hi + std::log1p(std::exp(std::min(x, y) - hi));
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  double stderr_slope = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ssr += r * r;
  }
  fit.residual = std::sqrt(ssr / static_cast<double>(n));
  fit.stderr_slope = n > 2 ? std::sqrt(ssr / static_cast<double>(n - 2) / sxx) : 0.0;
  return fit;
}

}  // namespace

std::string_view to_string(Classification c) noexcept {
  switch (c) {
    case Classification::Finite: return "finite";
    case Classification::Divergent: return "divergent";
    case Classification::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double carry = 0.0;
  for (const double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

IntegralEstimate integrate_interval(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, double rel_tol, std::size_t max_cells) {
  return integrate_impl(f, a, b, abs_tol, rel_tol, max_cells, false);
}

// ---------------------------------------------------------------------------
// RadialFunction

RadialFunction RadialFunction::from_values(Fn h) {
  RadialFunction out;
  out.values_ = std::move(h);
  return out;
}

RadialFunction RadialFunction::from_log_weighted(Fn log_r2h, double log_power) {
  RadialFunction out;
  out.log_weighted_ = std::move(log_r2h);
  out.log_power_ = log_power;
  return out;
}

RadialFunction RadialFunction::f_power(double q, double log_scale) {
  // log(r^2 (s F)^q) = q log s + (2 - 2q) l - 2q log(log 2 - l)
  return from_log_weighted(
      [q, log_scale](double l) {
        return q * log_scale + (2.0 - 2.0 * q) * l - 2.0 * q * std::log(kLog2 - l);
      },
      2.0 * q);
}

double RadialFunction::value(double r) const {
  if (values_) return values_(r);
  const double l = std::log(r);
  return std::exp(log_weighted_(l) - 2.0 * l);
}

double RadialFunction::weighted(double log_r) const {
  if (log_weighted_) return std::exp(log_weighted_(log_r));
  const double r = std::exp(log_r);
  if (r == 0.0) return 0.0;
  return r * r * values_(r);
}

double RadialFunction::log_weighted(double log_r) const {
  if (log_weighted_) return log_weighted_(log_r);
  const double w = weighted(log_r);
  return w > 0.0 ? std::log(w) : -kInf;
}

IntegralEstimate integrate_radial(const RadialFunction& h, double a, double b, double tol,
                                  std::size_t max_cells) {
  if (!(a >= 0.0 && a <= b && b <= 1.0)) {
    throw Error(ErrorKind::Domain, "integrate_radial: need 0 <= a <= b <= 1");
  }
  if (a == b) return {0.0, 0.0, 0, Classification::Finite};
  return integrate_radial_log(h, a == 0.0 ? -kInf : std::log(a), std::log(b), tol, max_cells);
}

IntegralEstimate integrate_radial_log(const RadialFunction& h, double log_a, double log_b,
                                      double tol, std::size_t max_cells) {
  if (!(tol > 0.0)) throw Error(ErrorKind::Precondition, "tolerance must be positive");
  if (log_a == -kInf) {
    auto mapped = [&h, log_b](double t) {
      const double one_minus = 1.0 - t;
      return h.weighted(log_b - t / one_minus) / (one_minus * one_minus);
    };
    return integrate_interval(mapped, 0.0, 1.0, tol, 0.0, max_cells);
  }
  return integrate_interval([&h](double l) { return h.weighted(l); }, log_a, log_b, tol, 0.0,
                            max_cells);
}

double log_integral(const std::function<double(double)>& psi, double log_a, double log_b,
                    double rel_tol) {
  if (!(log_a < log_b) || !std::isfinite(log_a) || !std::isfinite(log_b)) {
    throw Error(ErrorKind::Domain, "log_integral: need finite log_a < log_b");
  }
  constexpr int kProbe = 64;
  double ref = -kInf;
  for (int i = 0; i <= kProbe; ++i) {
    const double v = psi(log_a + (log_b - log_a) * i / kProbe);
    if (v > ref) ref = v;
  }
  if (ref == -kInf) return -kInf;
  auto scaled = [&psi, ref](double l) { return std::exp(psi(l) - ref); };
  const IntegralEstimate est = integrate_impl(scaled, log_a, log_b, 0.0, rel_tol,
                                              kDefaultCellBudget, true);
  if (!(est.value > 0.0)) return -kInf;
  return ref + std::log(est.value);
}

// ---------------------------------------------------------------------------
// Disk integrals

IntegralEstimate integrate_disk(const DiskField& field, ComplexValue center, double radius,
                                double tol, std::optional<double> excluded,
                                const DiskOptions& options) {
  if (!(radius > 0.0)) throw Error(ErrorKind::Domain, "integrate_disk: radius must be positive");
  if (excluded && !(*excluded >= 0.0 && *excluded <= radius)) {
    throw Error(ErrorKind::Domain, "integrate_disk: need 0 <= excluded <= radius");
  }
  if (!field.value && !field.log_weighted) {
    throw Error(ErrorKind::Precondition, "integrate_disk: empty field");
  }
  auto weighted = [&field, center](double log_rho, double theta) {
    if (field.log_weighted) return std::exp(field.log_weighted(log_rho, theta));
    const double rho = std::exp(log_rho);
    if (rho == 0.0) return 0.0;
    return rho * rho * field.value(center + std::polar(rho, theta));
  };
  std::size_t cells = 0;
  auto angular = [&](double log_rho) {
    const IntegralEstimate inner = integrate_impl(
        [&](double theta) { return weighted(log_rho, theta); }, 0.0, 2.0 * kPi, 0.0,
        options.inner_rel_tol, options.max_cells, true);
    cells += inner.cells;
    return inner.value;
  };
  const double log_b = std::log(radius);
  IntegralEstimate outer;
  if (!excluded || *excluded == 0.0) {
    auto mapped = [&](double t) {
      const double one_minus = 1.0 - t;
      return angular(log_b - t / one_minus) / (one_minus * one_minus);
    };
    outer = integrate_interval(mapped, 0.0, 1.0, tol, 0.0, options.max_cells);
  } else {
    outer = integrate_interval(angular, std::log(*excluded), log_b, tol, 0.0, options.max_cells);
  }
  outer.error += options.inner_rel_tol * std::abs(outer.value);
  outer.cells += cells;
  return outer;
}

// ---------------------------------------------------------------------------
// Cutoff ladders and the divergence probe

CutoffLadder::CutoffLadder(std::vector<double> log_eps) : log_eps_(std::move(log_eps)) {
  if (log_eps_.size() < 4) {
    throw Error(ErrorKind::Precondition, "cutoff ladder needs at least 4 rungs");
  }
  for (std::size_t i = 0; i < log_eps_.size(); ++i) {
    if (!std::isfinite(log_eps_[i]) || log_eps_[i] >= 0.0) {
      throw Error(ErrorKind::Precondition, "cutoff ladder rungs must lie in (0, 1)");
    }
    if (i > 0 && !(log_eps_[i] < log_eps_[i - 1])) {
      throw Error(ErrorKind::Precondition, "cutoff ladder must be strictly decreasing");
    }
  }
}

CutoffLadder CutoffLadder::geometric(double first, double ratio, int rungs) {
  if (!(first > 0.0 && first < 1.0) || !(ratio > 0.0 && ratio < 1.0) || rungs < 4) {
    throw Error(ErrorKind::Precondition,
                "geometric ladder needs 0 < first < 1, 0 < ratio < 1, rungs >= 4");
  }
  std::vector<double> log_eps(static_cast<std::size_t>(rungs));
  for (int i = 0; i < rungs; ++i) log_eps[i] = std::log(first) + i * std::log(ratio);
  return CutoffLadder(std::move(log_eps));
}

CutoffLadder CutoffLadder::from_log(std::vector<double> log_eps) {
  return CutoffLadder(std::move(log_eps));
}

CutoffLadder CutoffLadder::parse(std::string_view spec) {
  std::array<std::string, 3> parts;
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t colon = spec.find(':', start);
    if ((i < 2) == (colon == std::string_view::npos)) {
      throw Error(ErrorKind::Format, "ladder spec must be first:ratio:rungs");
    }
    parts[i] = std::string(spec.substr(start, colon == std::string_view::npos ? spec.npos
                                                                               : colon - start));
    start = colon + 1;
  }
  try {
    std::size_t used = 0;
    const double first = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("first");
    const double ratio = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("ratio");
    const int rungs = std::stoi(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("rungs");
    return geometric(first, ratio, rungs);
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::Format, "ladder spec must be first:ratio:rungs");
  }
}

CutoffLadder CutoffLadder::with_halved_tail() const {
  std::vector<double> extended = log_eps_;
  extended.push_back(log_eps_.back() - std::log(2.0));
  return CutoffLadder(std::move(extended));
}

namespace {

struct LadderFit {
  double raw = 0.0;
  LineFit corrected;
};

LadderFit fit_tail(std::span<const double> log_eps, std::span<const double> log_partials,
                   double log_power) {
  const std::size_t n = log_eps.size();
  const auto x = log_eps.subspan(n - 3);
  const auto y = log_partials.subspan(n - 3);
  std::array<double, 3> corrected{};
  for (std::size_t i = 0; i < 3; ++i) corrected[i] = y[i] + log_power * std::log(kLog2 - x[i]);
  LadderFit fit;
  fit.raw = fit_line(x, y).slope;
  fit.corrected = fit_line(x, corrected);
  return fit;
}

// Limit A of I(eps) = A - B / log(2/eps) fitted through three rungs.
double extrapolate(std::span<const double> log_eps, std::span<const double> log_partials) {
  std::array<double, 3> x{};
  std::array<double, 3> y{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (log_partials[i] > 700.0) return kInf;
    x[i] = 1.0 / (kLog2 - log_eps[i]);
    y[i] = std::exp(log_partials[i]);
  }
  return fit_line(x, y).intercept;
}

}  // namespace

ProbeResult divergence_probe(const RadialFunction& h, const CutoffLadder& ladder, double b,
                             double predicted_slope, const ProbeOptions& options) {
  if (!(b > 0.0 && b <= 1.0)) throw Error(ErrorKind::Domain, "divergence_probe: need 0 < b <= 1");
  const double log_b = std::log(b);
  const auto le = ladder.log_eps();
  if (!(le.front() < log_b)) {
    throw Error(ErrorKind::Precondition, "divergence_probe: ladder must lie inside (0, b)");
  }
  auto psi = [&h](double l) { return h.log_weighted(l); };

  ProbeResult out;
  out.predicted_slope = predicted_slope;
  out.log_eps.assign(le.begin(), le.end());
  const std::size_t n = le.size();
  out.log_partials.resize(n);
  out.log_partials[0] = log_integral(psi, le[0], log_b, options.rel_tol);
  for (std::size_t i = 1; i < n; ++i) {
    const double seg = log_integral(psi, le[i], le[i - 1], options.rel_tol);
    out.log_increments.push_back(seg);
    out.log_partials[i] = log_add_exp(out.log_partials[i - 1], seg);
  }

  const LadderFit fit = fit_tail(out.log_eps, out.log_partials, h.log_power());
  out.raw_slope = fit.raw;
  out.slope = fit.corrected.slope;
  out.slope_stderr = fit.corrected.stderr_slope;
  out.residual = fit.corrected.residual;

  // Stability: one more rung at half the smallest cutoff.
  std::vector<double> ext_eps = out.log_eps;
  std::vector<double> ext_partials = out.log_partials;
  const double halved = le.back() - std::log(2.0);
  ext_eps.push_back(halved);
  ext_partials.push_back(
      log_add_exp(out.log_partials.back(), log_integral(psi, halved, le.back(), options.rel_tol)));
  out.halved_slope = fit_tail(ext_eps, ext_partials, h.log_power()).corrected.slope;

  const auto eps_span = std::span<const double>(out.log_eps);
  const auto part_span = std::span<const double>(out.log_partials);
  out.extrapolated = extrapolate(eps_span.subspan(n - 3), part_span.subspan(n - 3));
  const double previous = extrapolate(eps_span.subspan(n - 4), part_span.subspan(n - 4));
  const double extrapolation_error = std::abs(out.extrapolated - previous);

  const double threshold =
      predicted_slope < 0.0 ? std::min(options.raw_threshold, 0.5 * std::abs(predicted_slope))
                            : options.raw_threshold;
  bool increments_decreasing = true;
  for (std::size_t i = 1; i < out.log_increments.size(); ++i) {
    const double w_prev = le[i - 1] - le[i];
    const double w_cur = le[i] - le[i + 1];
    if (out.log_increments[i] - std::log(w_cur) > out.log_increments[i - 1] - std::log(w_prev)) {
      increments_decreasing = false;
    }
  }

  const bool divergent =
      predicted_slope < 0.0 && out.raw_slope <= -threshold &&
      std::abs(out.slope - predicted_slope) <= options.slope_band * std::abs(predicted_slope) &&
      out.residual <= options.max_residual &&
      std::abs(out.halved_slope - out.slope) <= options.max_drift * std::abs(out.slope);
  const bool finite = out.raw_slope > -threshold && increments_decreasing &&
                      std::isfinite(out.extrapolated) &&
                      extrapolation_error <= options.finite_tol;

  IntegralEstimate& est = out.estimate;
  est.cells = n + 1;
  if (divergent) {
    est.value = kInf;
    est.error = 0.0;
    est.classification = Classification::Divergent;
  } else if (finite) {
    est.value = out.extrapolated;
    est.error = extrapolation_error;
    est.classification = Classification::Finite;
  } else {
    est.value = std::exp(out.log_partials.back());
    est.error = kInf;
    est.classification = Classification::Inconclusive;
  }
  return out;
}

}  // namespace edlab
