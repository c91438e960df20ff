#pragma once

namespace rydsim::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// CODATA 2018 exact values.
inline constexpr double boltzmann = 1.380649e-23;          // J/K
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
inline constexpr double zero_celsius = 273.15;             // K

// 85Rb defaults: mass and the two transition wavelengths of the
// 5S1/2 -> 5P3/2 -> 30S1/2 ladder.
inline constexpr double rb85_mass = 84.9118 * atomic_mass_unit;  // kg
inline constexpr double lambda_probe = 780e-9;             // m
inline constexpr double lambda_coupling = 480e-9;          // m

}  // namespace rydsim::constants
