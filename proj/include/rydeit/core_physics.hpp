#pragma once

#include <complex>

// Closed-form quantities of the coarse-grained Rydberg-EIT model. Everything
// here is a pure function of its arguments.
namespace rydeit {

class DetuningPoint;

/// Fixed physical constants of a run. Rates in rad/s, C6 in rad/s um^6.
struct AtomicSystem {
  double gamma_e_pop = 0.0;    ///< population decay rate of |e>
  double gamma_r_pop = 0.0;    ///< population decay rate of |r>
  double linewidth_1ph = 0.0;  ///< one-photon laser linewidth
  double linewidth_2ph = 0.0;  ///< two-photon laser linewidth
  double c6 = 0.0;             ///< van der Waals coefficient (C6 > 0: repulsive)
  double omega_c = 0.0;        ///< control Rabi frequency, real and >= 0
  double delta_c = 0.0;        ///< control detuning

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;

  /// Probe detuning paired with its two-photon detuning delta_p + delta_c.
  DetuningPoint at(double delta_p) const;

  bool operator==(const AtomicSystem&) const = default;
};

/// A probe detuning together with the two-photon detuning it implies. Only an
/// AtomicSystem can build one, so delta_2 is always delta_p + delta_c.
class DetuningPoint {
 public:
  double delta_p() const { return delta_p_; }
  double delta_2() const { return delta_2_; }

 private:
  friend struct AtomicSystem;
  DetuningPoint(double delta_p, double delta_2) : delta_p_(delta_p), delta_2_(delta_2) {}

  double delta_p_;
  double delta_2_;
};

/// Dimensionless complex polarizability. Im(value) is the absorption in units
/// of the resonant two-level absorption.
struct Polarizability {
  std::complex<double> value;

  double absorption() const { return value.imag(); }
};

struct TransverseRates {
  double gamma_e;
  double gamma_r;
};

/// gamma_e = Gamma_e/2 + linewidth_1ph, gamma_r = Gamma_r/2 + linewidth_2ph.
TransverseRates transverse_rates(const AtomicSystem& sys);

/// Half-width w = |Omega_c|^2 / gamma_e of the two-photon Lorentzian.
double eit_half_width(const AtomicSystem& sys);

/// R_sa = (C6 gamma_e / |Omega_c|^2)^(1/6), in um. Throws for omega_c == 0.
double blockade_radius(const AtomicSystem& sys);

/// Volume of a sphere of the given radius.
double superatom_volume(double radius);

/// rho_sa = (3/4pi) sqrt(|Omega_c|^2 / (gamma_e C6)) = 1 / V_sa, in um^-3.
double superatom_density(const AtomicSystem& sys);

/// Collective Rydberg population of a superatom of n_sa atoms driven by probe
/// intensity i_p (squared Rabi frequency), including saturation of the
/// |G> -> |R> transition. Result lies in [0, 1); 0 for a degenerate denominator.
double sigma_rr(const AtomicSystem& sys, const DetuningPoint& d, double n_sa, double i_p);

/// Two-level polarizability i gamma_e / (gamma_e - i delta_p).
Polarizability alpha_tla(const AtomicSystem& sys, const DetuningPoint& d);

/// EIT polarizability with the two-photon detuning offset by the mean-field
/// shift of the surrounding superatoms. Returns exactly 0 where the dark-state
/// term diverges (gamma_r == 0 and delta_2 == mean_shift).
Polarizability alpha_eit(const AtomicSystem& sys, const DetuningPoint& d, double mean_shift);

/// Mean-field shift (w/8) * sigma_rr_uncond from the external superatoms.
double mean_field_shift(const AtomicSystem& sys, double sigma_rr_uncond);

/// p_exc * a_tla + (1 - p_exc) * a_eit.
Polarizability alpha_conditional(const Polarizability& a_tla, const Polarizability& a_eit,
                                 double p_exc);

}  // namespace rydeit
