#include "edlab/error.hpp"

namespace edlab {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DegenerateBeltrami: return "degenerate-beltrami";
    case ErrorKind::InvalidDistortion: return "invalid-distortion";
    case ErrorKind::InconsistentInputs: return "inconsistent-inputs";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::QuadratureFailure: return "quadrature-failure";
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::UnresolvedLabel: return "unresolved-label";
    case ErrorKind::UnresolvedContamination: return "unresolved-contamination";
    case ErrorKind::SingularCenter: return "singular-center";
    case ErrorKind::NoCenterFound: return "no-center-found";
    case ErrorKind::ConformalEverywhere: return "conformal-everywhere";
    case ErrorKind::Format: return "format";
  }
  return "unknown";
}

bool is_numerical(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::QuadratureFailure:
    case ErrorKind::UnresolvedLabel:
    case ErrorKind::UnresolvedContamination:
    case ErrorKind::SingularCenter:
      return true;
    default:
      return false;
  }
}

}  // namespace edlab
