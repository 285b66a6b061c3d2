#pragma once

#include <numbers>

// Internal unit system: angular frequencies in rad/s, lengths in um,
// number densities in um^-3. Conversions happen only at I/O boundaries.
namespace rydeit::units {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Ordinary frequency nu [MHz] -> angular frequency omega = 2 pi nu [rad/s].
constexpr double from_mhz(double nu_mhz) { return two_pi * nu_mhz * 1e6; }
constexpr double to_mhz(double omega) { return omega / (two_pi * 1e6); }

inline constexpr double um_per_mm = 1e3;
inline constexpr double um3_per_mm3 = 1e9;

constexpr double per_mm3_to_per_um3(double rho) { return rho / um3_per_mm3; }
constexpr double per_um3_to_per_mm3(double rho) { return rho * um3_per_mm3; }

}  // namespace rydeit::units
