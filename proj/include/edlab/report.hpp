#pragma once

// JSON and CSV serialization of campaign results. Output is deterministic:
// keys keep insertion order, doubles print in shortest round-trip form and
// non-finite values become the strings "inf", "-inf" and "nan".

#include <json.hpp>
#include <string>
#include <string_view>

#include "edlab/campaign.hpp"
#include "edlab/sector_system.hpp"

namespace edlab {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;
inline constexpr std::string_view kLibraryVersion = "1.0.0";

/// Finite numbers as numbers, others as strings.
Json number(double x);
Json complex_json(ComplexValue z);

/// {"schema": "edlab.report.<kind>", "version": ..., "library": ...}
Json report_header(std::string_view kind);

/// log10 of the ladder cutoffs.
Json ladder_json(std::span<const double> log_eps);
Json estimate_json(const IntegralEstimate& estimate);
Json probe_json(const ProbeResult& probe);
Json checks_json(const PointwiseChecks& checks);
Json certificate_json(const DivergenceCertificate& certificate);
Json density_json(const DensityEstimate& estimate);
Json area_json(const AreaCertificate& certificate);

std::string sweep_csv(const SweepResult& sweep);

}  // namespace edlab
