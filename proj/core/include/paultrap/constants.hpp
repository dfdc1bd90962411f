#pragma once

#include <numbers>

namespace paultrap::constants {

inline constexpr double pi = std::numbers::pi;

// CODATA 2018 exact values.
inline constexpr double boltzmann = 1.380649e-23;          // J/K
inline constexpr double elementary_charge = 1.602176634e-19; // C

inline constexpr double vacuum_permittivity = 8.8541878128e-12; // F/m
inline constexpr double standard_gravity = 9.80665;             // m/s^2

}  // namespace paultrap::constants
