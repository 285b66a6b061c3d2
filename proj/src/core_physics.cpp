#include "rydeit/core_physics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rydeit {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("AtomicSystem: ") + what);
}

}  // namespace

void AtomicSystem::validate() const {
  require(std::isfinite(gamma_e_pop) && gamma_e_pop > 0.0, "gamma_e_pop must be > 0");
  require(std::isfinite(gamma_r_pop) && gamma_r_pop >= 0.0, "gamma_r_pop must be >= 0");
  require(std::isfinite(linewidth_1ph) && linewidth_1ph >= 0.0, "linewidth_1ph must be >= 0");
  require(std::isfinite(linewidth_2ph) && linewidth_2ph >= 0.0, "linewidth_2ph must be >= 0");
  require(std::isfinite(c6) && c6 > 0.0, "c6 must be > 0");
  require(std::isfinite(omega_c) && omega_c > 0.0, "omega_c must be > 0");
  require(std::isfinite(delta_c), "delta_c must be finite");
  const auto rates = transverse_rates(*this);
  require(rates.gamma_r < rates.gamma_e, "gamma_r must be smaller than gamma_e");
}

DetuningPoint AtomicSystem::at(double delta_p) const { return {delta_p, delta_p + delta_c}; }

TransverseRates transverse_rates(const AtomicSystem& sys) {
  return {0.5 * sys.gamma_e_pop + sys.linewidth_1ph, 0.5 * sys.gamma_r_pop + sys.linewidth_2ph};
}

double eit_half_width(const AtomicSystem& sys) {
  return sys.omega_c * sys.omega_c / transverse_rates(sys).gamma_e;
}

double blockade_radius(const AtomicSystem& sys) {
  if (sys.omega_c == 0.0) throw std::invalid_argument("blockade radius diverges for omega_c = 0");
  if (sys.c6 <= 0.0) throw std::invalid_argument("blockade radius requires c6 > 0");
  return std::pow(sys.c6 / eit_half_width(sys), 1.0 / 6.0);
}

double superatom_volume(double radius) { return 4.0 / 3.0 * std::numbers::pi * radius * radius * radius; }

double superatom_density(const AtomicSystem& sys) {
  if (sys.omega_c == 0.0) throw std::invalid_argument("superatom density vanishes for omega_c = 0");
  if (sys.c6 <= 0.0) throw std::invalid_argument("superatom density requires c6 > 0");
  const double gamma_e = transverse_rates(sys).gamma_e;
  return 3.0 / (4.0 * std::numbers::pi) *
         std::sqrt(sys.omega_c * sys.omega_c / (gamma_e * sys.c6));
}

double sigma_rr(const AtomicSystem& sys, const DetuningPoint& d, double n_sa, double i_p) {
  const double gamma_e = transverse_rates(sys).gamma_e;
  const double oc2 = sys.omega_c * sys.omega_c;
  const double drive = oc2 * n_sa * i_p;
  if (std::isinf(drive)) return 1.0;
  const double light_shift = oc2 - d.delta_p() * d.delta_2();
  const double denom = drive + light_shift * light_shift + d.delta_2() * d.delta_2() * gamma_e * gamma_e;
  if (denom == 0.0) return 0.0;
  return drive / denom;
}

Polarizability alpha_tla(const AtomicSystem& sys, const DetuningPoint& d) {
  using namespace std::complex_literals;
  const double gamma_e = transverse_rates(sys).gamma_e;
  return {1i * gamma_e / (gamma_e - 1i * d.delta_p())};
}

Polarizability alpha_eit(const AtomicSystem& sys, const DetuningPoint& d, double mean_shift) {
  using namespace std::complex_literals;
  if (sys.omega_c == 0.0) return alpha_tla(sys, d);
  const auto [gamma_e, gamma_r] = transverse_rates(sys);
  const std::complex<double> two_photon = gamma_r - 1i * (d.delta_2() - mean_shift);
  if (two_photon == 0.0) return {0.0};
  const std::complex<double> denom = gamma_e - 1i * d.delta_p() + sys.omega_c * sys.omega_c / two_photon;
  return {1i * gamma_e / denom};
}

double mean_field_shift(const AtomicSystem& sys, double sigma_rr_uncond) {
  return eit_half_width(sys) / 8.0 * sigma_rr_uncond;
}

Polarizability alpha_conditional(const Polarizability& a_tla, const Polarizability& a_eit,
                                 double p_exc) {
  return {p_exc * a_tla.value + (1.0 - p_exc) * a_eit.value};
}

}  // namespace rydeit
