#include "edlab/report.hpp"

#include <cmath>
#include <sstream>

namespace edlab {

namespace {

Json log10_list(std::span<const double> logs) {
  Json out = Json::array();
  for (double l : logs) out.push_back(number(l / std::log(10.0)));
  return out;
}

std::string csv_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

Json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

Json complex_json(ComplexValue z) { return Json::array({number(z.real()), number(z.imag())}); }

Json report_header(std::string_view kind) {
  Json j;
  j["schema"] = "edlab.report." + std::string(kind);
  j["version"] = kReportSchemaVersion;
  j["library"] = std::string(kLibraryVersion);
  return j;
}

Json ladder_json(std::span<const double> log_eps) { return log10_list(log_eps); }

Json estimate_json(const IntegralEstimate& estimate) {
  Json j;
  j["value"] = number(estimate.value);
  j["error"] = number(estimate.error);
  j["cells"] = estimate.cells;
  j["classification"] = std::string(to_string(estimate.classification));
  return j;
}

Json probe_json(const ProbeResult& probe) {
  Json j;
  j["log10_eps"] = log10_list(probe.log_eps);
  j["log10_partial_integrals"] = log10_list(probe.log_partials);
  j["log10_increments"] = log10_list(probe.log_increments);
  j["raw_slope"] = number(probe.raw_slope);
  j["slope"] = number(probe.slope);
  j["slope_stderr"] = number(probe.slope_stderr);
  j["predicted_slope"] = number(probe.predicted_slope);
  j["halved_slope"] = number(probe.halved_slope);
  j["residual"] = number(probe.residual);
  j["extrapolated"] = number(probe.extrapolated);
  j["estimate"] = estimate_json(probe.estimate);
  return j;
}

Json checks_json(const PointwiseChecks& checks) {
  Json j;
  j["samples"] = checks.samples;
  j["tagged"] = checks.tagged;
  j["pairing_violations"] = checks.pairing_violations;
  j["composition_violations"] = checks.composition_violations;
  j["jacobian_violations"] = checks.jacobian_violations;
  j["min_jacobian"] = number(checks.min_jacobian);
  j["min_composition_ratio"] = number(checks.min_composition_ratio);
  j["density"] = number(checks.density);
  j["density_half_width"] = number(checks.density_half_width);
  j["density_floor"] = kSectorDensity;
  j["passed"] = checks.passed;
  return j;
}

Json certificate_json(const DivergenceCertificate& c) {
  Json j;
  j["case"] = static_cast<int>(c.perturbation_case);
  j["verdict"] = std::string(to_string(c.verdict));
  if (c.perturbation_case != PerturbationCase::Unperturbed) {
    j["center_index"] = c.center_index;
    j["center"] = complex_json(c.center);
    j["r0"] = number(c.r0);
    j["tag"] = std::string(to_string(c.tag));
    j["q"] = number(c.q);
    j["jacobian_floor"] = number(c.jacobian_floor);
    j["epsilon1"] = number(c.epsilon1);
    j["log_prefactor"] = number(c.log_prefactor);
    j["checks"] = checks_json(c.checks);
  } else {
    j["energy_bound"] = number(c.energy);
  }
  j["ladder"] = ladder_json(c.probe.log_eps);
  j["partial_integrals_log10"] = log10_list(c.probe.log_partials);
  j["slope"] = number(c.probe.slope);
  j["probe"] = probe_json(c.probe);
  if (!c.reason.empty()) j["reason"] = c.reason;
  return j;
}

Json density_json(const DensityEstimate& e) {
  Json j;
  j["center_k"] = e.center_index;
  j["r"] = number(e.r);
  j["tag"] = std::string(to_string(e.tag));
  j["estimate"] = number(e.ratio);
  j["half_width"] = number(e.half_width);
  j["lower"] = number(e.lower());
  j["samples"] = e.samples;
  j["seed"] = e.seed;
  j["unresolved_fraction"] = number(e.unresolved_fraction);
  return j;
}

Json area_json(const AreaCertificate& a) {
  Json j;
  j["counts"] = a.counts;
  Json bounds = Json::array();
  for (double b : a.count_bounds) bounds.push_back(number(b));
  j["count_bounds"] = bounds;
  j["area"] = number(a.area);
  j["geometric_bound"] = number(a.geometric_bound);
  j["sector_bound"] = number(a.sector_bound);
  j["holds"] = a.holds;
  return j;
}

std::string sweep_csv(const SweepResult& sweep) {
  std::ostringstream os;
  os << "alpha,case,center_k,r0,tag,q,epsilon1,slope,predicted_slope,verdict\n";
  for (std::size_t i = 0; i < sweep.alphas.size(); ++i) {
    const DivergenceCertificate& c = sweep.certificates[i];
    os << csv_number(sweep.alphas[i]) << ',' << static_cast<int>(c.perturbation_case) << ','
       << c.center_index << ',' << csv_number(c.r0) << ',' << to_string(c.tag) << ','
       << csv_number(c.q) << ',' << csv_number(c.epsilon1) << ',' << csv_number(c.probe.slope)
       << ',' << csv_number(c.probe.predicted_slope) << ',' << to_string(c.verdict) << '\n';
  }
  return os.str();
}

}  // namespace edlab
