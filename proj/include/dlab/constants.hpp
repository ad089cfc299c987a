#pragma once

#include <cmath>

namespace dlab {

// Default unit system is normalized: eps0 = mu0 = c = 1. The SI vacuum
// values are provided for specs declared with "units": "si".
namespace si {
inline constexpr double eps0 = 1.0e-9 / (36.0 * 3.14159265358979323846);
inline constexpr double mu0 = 4.0 * 3.14159265358979323846 * 1.0e-7;
} // namespace si

/// Speed of light for the given background constants, eps0*mu0*c^2 = 1.
inline double light_speed(double eps0, double mu0) { return 1.0 / std::sqrt(eps0 * mu0); }

} // namespace dlab
