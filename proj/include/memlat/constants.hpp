#pragma once

#include <numbers>

// CODATA 2018 exact / recommended values, SI units.
namespace memlat::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double hbar = 1.054571817e-34;         // J s
inline constexpr double speed_of_light = 299792458.0;   // m / s
inline constexpr double boltzmann = 1.380649e-23;       // J / K

// Rb-87 D2 line.
inline constexpr double rb87_mass = 1.44316e-25;                 // kg
inline constexpr double rb87_d2_wavelength = 780.241e-9;         // m
inline constexpr double rb87_d2_linewidth = two_pi * 6.07e6;     // rad / s

}  // namespace memlat::constants
