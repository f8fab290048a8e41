// edlab: verification campaigns for the exponential-energy examples.
//
// Exit codes
//   0  all checks pass / certificate as expected
//   1  usage or configuration error (nothing computed)
//   2  a verification check failed
//   3  numerical nonconvergence outside a check
//
// Reports go to --out, else $EDLAB_OUT_DIR/<command>.<format>, else stdout.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "edlab/campaign.hpp"
#include "edlab/error.hpp"
#include "edlab/radial_stretch.hpp"
#include "edlab/report.hpp"
#include "edlab/verification.hpp"

namespace {

using namespace edlab;

constexpr int kExitPass = 0;
constexpr int kExitConfig = 1;
constexpr int kExitFailed = 2;
constexpr int kExitNumerical = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string command;
  double p = 1.0;
  int max_level = 6;
  std::size_t kmax = ExtendedDistortionField::kDefaultKmax;
  std::optional<double> tol;
  std::uint64_t seed = 1;
  std::string ladder;
  std::string phi = "zbar-bump";
  std::string eta = "0.5,0";
  std::string out;
  std::string format = "json";
  // density-check
  std::size_t center = 1;
  std::vector<double> radii{1.0 / 32.0};
  std::size_t samples = 1'000'000;
  // sweep-eta
  double magnitude = 0.3;
  std::size_t angles = 32;
  // export-grid
  std::size_t n = 256;
  std::string field = "K";

  ComplexValue eta_value{};
  std::optional<CutoffLadder> ladder_value;
};

ComplexValue parse_eta(const std::string& text) {
  const std::size_t comma = text.find(',');
  if (comma == std::string::npos) throw ConfigError("--eta must be \"re,im\"");
  try {
    std::size_t used_re = 0, used_im = 0;
    const std::string re = text.substr(0, comma), im = text.substr(comma + 1);
    const double a = std::stod(re, &used_re);
    const double b = std::stod(im, &used_im);
    if (used_re != re.size() || used_im != im.size()) throw std::invalid_argument(text);
    return {a, b};
  } catch (const std::logic_error&) {
    throw ConfigError("--eta must be \"re,im\", got '" + text + "'");
  }
}

void validate(Config& c) {
  if (!(c.p > 0.0) || !std::isfinite(c.p)) throw ConfigError("--p must be positive");
  if (c.max_level < 1 || c.max_level > SectorSystem::kMaxLevelCeiling) {
    throw ConfigError("--max-level must be in 1.." +
                      std::to_string(SectorSystem::kMaxLevelCeiling));
  }
  if (c.kmax < 1) throw ConfigError("--kmax must be >= 1");
  if (c.tol && !(*c.tol > 0.0)) throw ConfigError("--tol must be positive");
  if (c.format != "json" && c.format != "csv") throw ConfigError("--format must be json or csv");
  c.eta_value = parse_eta(c.eta);
  if (!c.ladder.empty()) {
    try {
      c.ladder_value = CutoffLadder::parse(c.ladder);
    } catch (const Error& e) {
      throw ConfigError(std::string("--ladder: ") + e.what());
    }
  }
  if (c.command == "perturb" || c.command == "sweep-eta") {
    try {
      const TestFunction phi = TestFunction::from_name(c.phi);
      const double size = c.command == "perturb" ? std::abs(c.eta_value) : c.magnitude;
      if (!(size * phi.gradient_sup() < 1.0)) {
        throw ConfigError("|eta| times the gradient bound of --phi must be < 1");
      }
    } catch (const Error& e) {
      throw ConfigError(std::string("--phi: ") + e.what());
    }
  }
  if (c.command == "density-check") {
    if (c.samples < 10'000) throw ConfigError("--samples must be >= 10000");
    if (c.center < 1) throw ConfigError("--center is 1-based");
    for (double r : c.radii) {
      if (!(r > 0.0)) throw ConfigError("--radius must be positive");
    }
  }
  if (c.command == "sweep-eta" && c.angles < 16) throw ConfigError("--angles must be >= 16");
  if (c.command == "sweep-eta" && !(c.magnitude >= 0.0)) {
    throw ConfigError("--magnitude must be >= 0");
  }
  if (c.command == "export-grid") {
    if (c.format != "csv") throw ConfigError("export-grid writes csv only");
    if (c.n < 2) throw ConfigError("--n must be >= 2");
    if (c.field != "f" && c.field != "K" && c.field != "mu" && c.field != "K-extended" &&
        c.field != "mu-extended") {
      throw ConfigError("--field must be one of f, K, mu, K-extended, mu-extended");
    }
  }
  if (c.command == "verify-basic" && c.format != "json") {
    throw ConfigError("verify-basic writes json only");
  }
}

Json config_json(const Config& c) {
  Json j;
  j["command"] = c.command;
  j["p"] = c.p;
  j["max_level"] = c.max_level;
  j["kmax"] = c.kmax;
  j["tol"] = c.tol ? number(*c.tol) : Json();
  j["seed"] = c.seed;
  j["ladder"] = c.ladder;
  j["format"] = c.format;
  if (c.command == "perturb" || c.command == "sweep-eta") j["phi"] = c.phi;
  if (c.command == "perturb") j["eta"] = complex_json(c.eta_value);
  if (c.command == "sweep-eta") {
    j["magnitude"] = c.magnitude;
    j["angles"] = c.angles;
  }
  if (c.command == "density-check") {
    j["center"] = c.center;
    j["radii"] = c.radii;
    j["samples"] = c.samples;
  }
  if (c.command == "export-grid") {
    j["field"] = c.field;
    j["n"] = c.n;
  }
  return j;
}

void emit(const Config& c, const std::string& text) {
  std::filesystem::path path;
  if (!c.out.empty()) {
    if (c.out == "-") {
      std::cout << text;
      return;
    }
    path = c.out;
  } else if (const char* dir = std::getenv("EDLAB_OUT_DIR"); dir != nullptr && *dir != '\0') {
    path = std::filesystem::path(dir) / (c.command + "." + c.format);
  } else {
    std::cout << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file || !(file << text)) throw ConfigError("cannot write " + path.string());
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json base_report(const Config& c, std::string_view kind) {
  Json j = report_header(kind);
  j["config"] = config_json(c);
  return j;
}

ExtendedDistortionField make_field(const Config& c) {
  return ExtendedDistortionField(c.p, std::make_shared<const SectorSystem>(build_system(c.max_level)),
                                 c.kmax);
}

CampaignOptions campaign_options(const Config& c) {
  CampaignOptions options;
  if (c.ladder_value) options.ladder = *c.ladder_value;
  options.seed = c.seed;
  return options;
}

int cmd_verify_basic(const Config& c) {
  const double tol = c.tol.value_or(1e-10);
  std::vector<CheckResult> checks;
  checks.push_back(run_check("f-integral", [&] { return check_f_integral(tol); }));
  checks.push_back(run_check("basic-energy", [&] { return check_basic_energy(tol); }));
  checks.push_back(run_check("f-dichotomy", [] { return check_f_dichotomy(); }));
  std::optional<RadialProfile> profile;
  checks.push_back(run_check("profile", [&] {
    profile = build_profile(tol);
    return check_profile(*profile);
  }));
  auto needs_profile = [&](auto&& fn) {
    return [&profile, fn]() -> CheckResult {
      if (!profile) throw Error(ErrorKind::QuadratureFailure, "profile unavailable");
      return fn(*profile);
    };
  };
  checks.push_back(run_check("mu-symmetry", needs_profile([&](const RadialProfile& pr) {
                               return check_mu_symmetry(pr, c.seed);
                             })));
  checks.push_back(run_check("dirichlet", needs_profile([&](const RadialProfile& pr) {
                               return check_dirichlet(pr, std::max(tol, 1e-12));
                             })));
  Json report = base_report(c, "verify-basic");
  Json list = Json::array();
  bool passed = true;
  for (const CheckResult& check : checks) {
    list.push_back(check_json(check));
    passed = passed && check.passed;
  }
  report["checks"] = list;
  report["passed"] = passed;
  emit(c, dump(report));
  for (const CheckResult& check : checks) {
    std::cerr << (check.passed ? "PASS " : "FAIL ") << check.name;
    if (!check.passed && !check.detail.empty()) std::cerr << ": " << check.detail;
    std::cerr << '\n';
  }
  return passed ? kExitPass : kExitFailed;
}

int cmd_build_sectors(const Config& c) {
  const SectorSystem system = build_system(c.max_level);
  const AreaCertificate area = area_certificate(system);
  if (c.format == "csv") {
    std::ostringstream os;
    os.precision(17);
    os << "k,level,j,l,x,y,radius\n";
    for (const DyadicCenter& z : system.centers()) {
      os << z.index << ',' << z.level << ',' << z.j << ',' << z.l << ',' << z.point().real()
         << ',' << z.point().imag() << ',' << z.radius() << '\n';
    }
    emit(c, os.str());
  } else {
    Json report = base_report(c, "build-sectors");
    report["system"] = Json::parse(system.to_json());
    report["area"] = area_json(area);
    report["passed"] = area.holds;
    emit(c, dump(report));
  }
  return area.holds ? kExitPass : kExitFailed;
}

int cmd_density_check(const Config& c) {
  const SectorSystem system = build_system(c.max_level);
  if (c.center > system.centers().size()) {
    throw ConfigError("--center exceeds the " + std::to_string(system.centers().size()) +
                      " centers at this --max-level");
  }
  const DyadicCenter& center = system.center(c.center);
  for (double r : c.radii) {
    if (!(r < center.radius())) throw ConfigError("--radius must be below the center radius");
  }
  std::vector<DensityEstimate> estimates;
  for (double r : c.radii) {
    for (const DensityEstimate& e : density_estimates(system, center, r, c.samples, c.seed)) {
      estimates.push_back(e);
    }
  }
  bool passed = true;
  for (const DensityEstimate& e : estimates) passed = passed && e.lower() >= kDensityFloor;
  if (c.format == "csv") {
    std::string text = density_csv_header() + "\n";
    for (const DensityEstimate& e : estimates) text += density_csv_row(e) + "\n";
    emit(c, text);
  } else {
    Json report = base_report(c, "density-check");
    report["floor"] = kDensityFloor;
    Json list = Json::array();
    for (const DensityEstimate& e : estimates) list.push_back(density_json(e));
    report["estimates"] = list;
    report["passed"] = passed;
    emit(c, dump(report));
  }
  return passed ? kExitPass : kExitFailed;
}

bool expected_verdict(const DivergenceCertificate& cert) {
  if (cert.perturbation_case == PerturbationCase::Unperturbed) {
    return cert.verdict == Classification::Finite;
  }
  return cert.verdict == Classification::Divergent;
}

int cmd_perturb(const Config& c) {
  const ExtendedDistortionField field = make_field(c);
  const CampaignOptions options = campaign_options(c);
  const DivergenceCertificate cert =
      perturbed_energy_campaign(field, TestFunction::from_name(c.phi), c.eta_value, options);
  const DivergenceCertificate base = certify_unperturbed(field, options.ladder, options.probe);
  const bool passed = expected_verdict(cert) && base.verdict == Classification::Finite;
  if (c.format == "csv") {
    SweepResult single;
    single.alphas.push_back(std::arg(c.eta_value));
    single.certificates.push_back(cert);
    emit(c, sweep_csv(single));
  } else {
    Json report = base_report(c, "perturb");
    report["certificate"] = certificate_json(cert);
    report["unperturbed"] = certificate_json(base);
    report["passed"] = passed;
    emit(c, dump(report));
  }
  std::cerr << "case " << to_string(cert.perturbation_case) << ", verdict "
            << to_string(cert.verdict) << '\n';
  return passed ? kExitPass : kExitFailed;
}

int cmd_sweep_eta(const Config& c) {
  const ExtendedDistortionField field = make_field(c);
  const SweepResult sweep = alpha_sweep(field, TestFunction::from_name(c.phi), c.magnitude,
                                        c.angles, campaign_options(c));
  const bool passed = sweep.all_divergent && sweep.min_epsilon > 0.0;
  if (c.format == "csv") {
    emit(c, sweep_csv(sweep));
  } else {
    Json report = base_report(c, "sweep-eta");
    report["min_epsilon1"] = number(sweep.min_epsilon);
    report["all_divergent"] = sweep.all_divergent;
    Json list = Json::array();
    for (std::size_t i = 0; i < sweep.alphas.size(); ++i) {
      Json entry;
      entry["alpha"] = sweep.alphas[i];
      entry["certificate"] = certificate_json(sweep.certificates[i]);
      list.push_back(entry);
    }
    report["sweep"] = list;
    report["passed"] = passed;
    emit(c, dump(report));
  }
  return passed ? kExitPass : kExitFailed;
}

int cmd_export_grid(const Config& c) {
  std::optional<RadialProfile> profile;
  std::optional<ExtendedDistortionField> field;
  const bool extended = c.field == "K-extended" || c.field == "mu-extended";
  if (c.field == "f" || c.field == "mu") profile = build_profile(c.tol.value_or(1e-10));
  if (extended) field = make_field(c);
  const bool two_columns = c.field == "f" || c.field == "mu" || c.field == "mu-extended";
  std::ostringstream os;
  os.precision(17);
  os << (two_columns ? "x,y,re,im\n" : "x,y,k\n");
  const double nan = std::nan("");
  for (std::size_t i = 0; i < c.n; ++i) {
    const double y = -1.0 + (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(c.n);
    for (std::size_t j = 0; j < c.n; ++j) {
      const double x = -1.0 + (2.0 * static_cast<double>(j) + 1.0) / static_cast<double>(c.n);
      const ComplexValue z{x, y};
      ComplexValue v{nan, nan};
      if (std::norm(z) < 1.0) {
        try {
          if (c.field == "f") v = radial_map(z, *profile);
          if (c.field == "mu") v = radial_beltrami(z, *profile).value();
          if (c.field == "K") v = basic_distortion(std::abs(z)).value();
          if (c.field == "K-extended") v = extended_distortion(z, *field).k.value();
          if (c.field == "mu-extended") v = extended_beltrami(z, *field).value();
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::SingularCenter && e.kind() != ErrorKind::UnresolvedLabel &&
              e.kind() != ErrorKind::Domain) {
            throw;
          }
        }
      }
      os << x << ',' << y << ',' << v.real();
      if (two_columns) os << ',' << v.imag();
      os << '\n';
    }
  }
  emit(c, os.str());
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  Config config;
  CLI::App app{"edlab: verification campaigns for exponential-energy examples"};
  app.footer(
      "Exit codes: 0 pass, 1 usage/config, 2 verification failure, 3 numerical nonconvergence.\n"
      "Environment: EDLAB_OUT_DIR sets the default output directory (<command>.<format>).");
  app.require_subcommand(1, 1);
  app.fallthrough();

  app.add_option("--p", config.p, "Exponent p of the energy (default 1)");
  app.add_option("--max-level", config.max_level, "Deepest sector level (default 6)");
  app.add_option("--kmax", config.kmax, "Number of series terms K_max (default 200)");
  app.add_option("--tol", config.tol, "Quadrature / profile tolerance");
  app.add_option("--seed", config.seed, "Seed of the counter RNG (default 1)");
  app.add_option("--ladder", config.ladder, "Cutoff ladder \"first:ratio:rungs\"");
  app.add_option("--phi", config.phi, "Test function: bump, zbar-bump, izbar-bump (default zbar-bump)");
  app.add_option("--eta", config.eta, "Perturbation parameter \"re,im\" (default 0.5,0)");
  app.add_option("--out", config.out, "Output path, '-' for stdout");
  app.add_option("--format", config.format, "json or csv (default json)");

  CLI::App* verify = app.add_subcommand("verify-basic", "Checks of the radial stretching example");
  CLI::App* sectors = app.add_subcommand("build-sectors", "Sector centers and area certificate");
  CLI::App* density = app.add_subcommand("density-check", "Monte Carlo sector densities");
  density->add_option("--center", config.center, "1-based center index (default 1)");
  density->add_option("--radius", config.radii, "Disk radii (default 2^-5)");
  density->add_option("--samples", config.samples, "Samples per disk (default 1e6)");
  CLI::App* perturb = app.add_subcommand("perturb", "Divergence certificate for g = z + eta phi");
  CLI::App* sweep = app.add_subcommand("sweep-eta", "Certificates for eta = m e^{i alpha}");
  sweep->add_option("--magnitude", config.magnitude, "|eta| (default 0.3)");
  sweep->add_option("--angles", config.angles, "Number of angles (default 32)");
  CLI::App* grid = app.add_subcommand("export-grid", "Sample a field on an N x N grid to CSV");
  grid->add_option("--n", config.n, "Grid points per axis (default 256)");
  grid->add_option("--field", config.field, "f, K, mu, K-extended or mu-extended (default K)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }
  for (CLI::App* sub : {verify, sectors, density, perturb, sweep, grid}) {
    if (sub->parsed()) config.command = sub->get_name();
  }
  if (config.command == "export-grid" && app.count("--format") == 0) config.format = "csv";

  try {
    validate(config);
    if (config.command == "verify-basic") return cmd_verify_basic(config);
    if (config.command == "build-sectors") return cmd_build_sectors(config);
    if (config.command == "density-check") return cmd_density_check(config);
    if (config.command == "perturb") return cmd_perturb(config);
    if (config.command == "sweep-eta") return cmd_sweep_eta(config);
    return cmd_export_grid(config);
  } catch (const ConfigError& e) {
    std::cerr << "edlab: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "edlab: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return is_numerical(e.kind()) ? kExitNumerical : kExitConfig;
  }
}
