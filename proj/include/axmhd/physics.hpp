#pragma once

#include <numbers>

namespace axmhd::constants {

inline constexpr double mu0 = 4.0e-7 * std::numbers::pi;  // H/m
inline constexpr double proton_mass = 1.67262192369e-27;  // kg
inline constexpr double eV = 1.602176634e-19;             // J

}  // namespace axmhd::constants
