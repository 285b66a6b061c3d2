#pragma once

#include <cmath>
#include <numbers>

#include "rydeit/core_physics.hpp"
#include "rydeit/medium.hpp"

// Cold 87Rb / 60S parameter set written out from the published constants.
namespace fixtures {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline rydeit::AtomicSystem rb87() {
  rydeit::AtomicSystem sys;
  sys.gamma_e_pop = 3.8e7;
  sys.gamma_r_pop = 5e3;
  sys.linewidth_1ph = two_pi * 5.7e4;
  sys.linewidth_2ph = two_pi * 1.1e5;
  sys.c6 = two_pi * 1.4e11;
  sys.omega_c = two_pi * 2.25e6;
  sys.delta_c = -two_pi * 1e5;
  return sys;
}

// 1.2e7 mm^-3 over 1.3 mm with optical depth 4.524.
inline rydeit::MediumProfile homogeneous_cloud() {
  return rydeit::MediumProfile::homogeneous(1300.0, 1.2e7 * 1e-9, 4.524);
}

// Peak 1.32e7 mm^-3, half-width 0.7 mm, centered, same optical depth.
inline rydeit::MediumProfile gaussian_cloud() {
  return rydeit::MediumProfile::gaussian(1300.0, 1.32e7 * 1e-9, 650.0, 700.0, 4.524);
}

inline double mhz(double nu) { return two_pi * nu * 1e6; }

}  // namespace fixtures
