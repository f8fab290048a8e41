#pragma once

#include <cmath>
#include <complex>

namespace edlab {

using ComplexValue = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kLog2 = 0.69314718055994530941723212145817657;
inline constexpr double kE = 2.71828182845904523536028747135266250;

inline bool is_finite(ComplexValue z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace edlab
