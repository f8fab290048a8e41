#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace edlab {

enum class ErrorKind {
  DegenerateBeltrami,
  InvalidDistortion,
  InconsistentInputs,
  Domain,
  Precondition,
  QuadratureFailure,
  Capacity,
  UnresolvedLabel,
  UnresolvedContamination,
  SingularCenter,
  NoCenterFound,
  ConformalEverywhere,
  Format,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Failures of a computation rather than of its inputs: quadrature, label
/// resolution and sampling contamination.
bool is_numerical(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` lets callers map failures
/// onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace edlab
