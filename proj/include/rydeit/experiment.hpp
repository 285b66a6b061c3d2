#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rydeit/core_physics.hpp"
#include "rydeit/medium.hpp"
#include "rydeit/propagation.hpp"

namespace rydeit {

struct SweepSpec {
  std::vector<double> delta_p_values;  ///< rad/s, strictly increasing
  std::vector<double> omega_p_inputs;  ///< input probe Rabi frequencies, rad/s
  int n_realizations = 10;
  double g2_input = 1.0;

  void validate() const;
};

/// n points evenly spaced over [lo, hi], endpoints included.
std::vector<double> linspace(double lo, double hi, int n);

/// 201 probe detunings over +-15 MHz (angular).
std::vector<double> default_detunings();

struct SpectrumPoint {
  double transmission = 0.0;
  double transmission_stderr = 0.0;
  double g2_out = 0.0;
  double g2_stderr = 0.0;
  double exit_intensity = 0.0;
  std::optional<std::string> error;
};

/// Points are stored row-major by (intensity, detuning).
struct SpectrumResult {
  std::vector<double> omega_p_inputs;
  std::vector<double> delta_p_values;
  std::vector<SpectrumPoint> points;

  const SpectrumPoint& at(std::size_t intensity, std::size_t detuning) const {
    return points[intensity * delta_p_values.size() + detuning];
  }
  std::vector<double> transmission(std::size_t intensity) const;
  std::vector<double> g2_out(std::size_t intensity) const;
};

struct SweepOptions {
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Propagates every (Omega_p(0), Delta_p) pair independently. A point that
/// fails keeps its error message and NaN outputs; the sweep itself goes on.
SpectrumResult run_sweep(const SweepSpec& spec, const AtomicSystem& sys,
                         const MediumProfile& medium, const PropagationConfig& cfg,
                         SweepOptions options = {});

/// Same, on an explicitly built superatom grid.
SpectrumResult run_sweep(const SweepSpec& spec, const AtomicSystem& sys, const SuperatomGrid& grid,
                         const PropagationConfig& cfg, SweepOptions options = {});

struct LineObservables {
  double t_max;        ///< peak transmission inside the window
  double fwhm;         ///< full width at half maximum above the local background, rad/s
  double delta_p_max;  ///< parabolically refined position of the peak, rad/s
};

/// EIT line of one transmission spectrum. The peak is searched where
/// |delta_p + delta_c| < window; the background is the higher of the two
/// transmission minima flanking the peak inside that window. Returns nullopt
/// when there is no interior peak ("no EIT line").
std::optional<LineObservables> extract_line(std::span<const double> delta_p,
                                            std::span<const double> transmission,
                                            double delta_c, double window);

/// Line of intensity row i; window defaults to Omega_c.
std::optional<LineObservables> extract_line(const SpectrumResult& result, std::size_t intensity,
                                            const AtomicSystem& sys,
                                            std::optional<double> window = std::nullopt);

/// Scalar scales of a run. Lengths in um, densities in um^-3, rates in rad/s.
struct DerivedQuantities {
  double blockade_radius;
  double superatom_volume;
  double superatom_density;
  double mean_density;
  double atoms_per_superatom;
  double mean_kappa;
  double optical_depth;
  double eit_half_width;
  double group_velocity;       ///< m/s
  double saturation_intensity; ///< rad^2/s^2
  double saturation_rabi;      ///< sqrt(saturation_intensity), rad/s
  double antibunching_window;  ///< s
};

/// Literature estimate of the antibunching window, reported for comparison.
inline constexpr double quoted_antibunching_window = 1.6e-9;

DerivedQuantities derived_quantities(const AtomicSystem& sys, const MediumProfile& medium);

/// Probe photon density (rho/4) i_p / |Omega_c|^2 inside the EIT window.
double photon_density(const AtomicSystem& sys, double atom_density, double i_p);

/// v = 2 |Omega_c|^2 / (kappa gamma_e), m/s for kappa in um^-1.
double group_velocity(const AtomicSystem& sys, double kappa);

}  // namespace rydeit
