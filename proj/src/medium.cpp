#include "rydeit/medium.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <fmt/core.h>

namespace rydeit {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("MediumProfile: ") + what);
}

}  // namespace

MediumProfile::MediumProfile(ProfileKind kind, double length, double rho_peak, double center,
                             double sigma, double optical_depth)
    : kind_(kind),
      length_(length),
      rho_peak_(rho_peak),
      center_(center),
      sigma_rho_(sigma),
      optical_depth_(optical_depth),
      cross_section_(0.0) {
  require(std::isfinite(length) && length > 0.0, "length must be > 0");
  require(std::isfinite(rho_peak) && rho_peak > 0.0, "density must be > 0");
  require(std::isfinite(optical_depth) && optical_depth > 0.0, "optical_depth must be > 0");
  if (kind == ProfileKind::gaussian) {
    require(std::isfinite(sigma) && sigma > 0.0, "sigma_rho must be > 0");
    require(std::isfinite(center), "center must be finite");
  }
  const double column = column_density();
  require(column > 0.0, "density integrates to zero over [0, L]");
  cross_section_ = optical_depth_ / column;
}

MediumProfile MediumProfile::homogeneous(double length, double density, double optical_depth) {
  return {ProfileKind::homogeneous, length, density, 0.5 * length, 0.0, optical_depth};
}

MediumProfile MediumProfile::gaussian(double length, double peak_density, double center,
                                      double sigma, double optical_depth) {
  return {ProfileKind::gaussian, length, peak_density, center, sigma, optical_depth};
}

double MediumProfile::column_density() const {
  if (kind_ == ProfileKind::homogeneous) return rho_peak_ * length_;
  const double scale = sigma_rho_ * std::numbers::sqrt2;
  return rho_peak_ * sigma_rho_ * std::sqrt(std::numbers::pi / 2.0) *
         (std::erf((length_ - center_) / scale) - std::erf(-center_ / scale));
}

double MediumProfile::density_unchecked(double z) const {
  if (kind_ == ProfileKind::homogeneous) return rho_peak_;
  const double x = (z - center_) / sigma_rho_;
  return rho_peak_ * std::exp(-0.5 * x * x);
}

double density_at(const MediumProfile& m, double z) {
  if (!(z >= 0.0 && z <= m.length()))
    throw std::out_of_range(fmt::format("z = {} um outside medium [0, {}] um", z, m.length()));
  return m.density_unchecked(z);
}

double kappa_at(const MediumProfile& m, double z) { return m.cross_section() * density_at(m, z); }

SuperatomGrid build_grid(const MediumProfile& m, const AtomicSystem& sys) {
  return build_grid(m, blockade_radius(sys));
}

SuperatomGrid build_grid(const MediumProfile& m, double r_sa) {
  if (!(std::isfinite(r_sa) && r_sa > 0.0)) throw std::invalid_argument("r_sa must be > 0");

  SuperatomGrid grid{{}, r_sa, m, false};
  const double width = 2.0 * r_sa;
  const double length = m.length();
  const double volume = superatom_volume(r_sa);

  // Snap ratios within rounding of an integer so L = k * 2 R_sa gives k cells.
  const double ratio = length / width;
  double full = std::floor(ratio);
  if (ratio - full > 1.0 - 1e-12) full += 1.0;

  std::size_t n_full = static_cast<std::size_t>(full);
  if (n_full == 0) grid.degenerate = true;
  const bool remainder = n_full == 0 || length - full * width > 1e-12 * length;

  auto push = [&](double z0, double z1) {
    const double mid = 0.5 * (z0 + z1);
    const double rho = m.density_unchecked(mid);
    grid.cells.push_back({z0, z1, rho * volume, m.cross_section() * rho});
  };

  grid.cells.reserve(n_full + 1);
  for (std::size_t k = 0; k < n_full; ++k) {
    const double z0 = static_cast<double>(k) * width;
    const double z1 = (k + 1 == n_full && !remainder) ? length : static_cast<double>(k + 1) * width;
    push(z0, z1);
  }
  if (remainder) push(static_cast<double>(n_full) * width, length);
  return grid;
}

}  // namespace rydeit
