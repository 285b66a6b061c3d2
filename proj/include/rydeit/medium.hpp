#pragma once

#include <vector>

#include "rydeit/core_physics.hpp"

namespace rydeit {

enum class ProfileKind { homogeneous, gaussian };

/// Atomic density along the propagation axis z in [0, length].
///
/// The absorption coefficient is kappa(z) = cross_section() * rho(z), where the
/// effective cross-section is calibrated once so that kappa integrates to the
/// requested resonant optical depth over [0, length].
class MediumProfile {
 public:
  static MediumProfile homogeneous(double length, double density, double optical_depth);
  static MediumProfile gaussian(double length, double peak_density, double center,
                                double sigma, double optical_depth);

  ProfileKind kind() const { return kind_; }
  double length() const { return length_; }
  double rho_peak() const { return rho_peak_; }
  double center() const { return center_; }
  double sigma_rho() const { return sigma_rho_; }
  double optical_depth() const { return optical_depth_; }

  /// Integral of rho over [0, length], um^-2.
  double column_density() const;
  /// Average density over [0, length].
  double mean_density() const { return column_density() / length_; }
  /// Average absorption coefficient optical_depth / length.
  double mean_kappa() const { return optical_depth_ / length_; }
  /// Effective absorption cross-section, um^2.
  double cross_section() const { return cross_section_; }

  /// Density without the range check, for z anywhere on the axis.
  double density_unchecked(double z) const;

  bool operator==(const MediumProfile&) const = default;

 private:
  MediumProfile(ProfileKind kind, double length, double rho_peak, double center, double sigma,
                double optical_depth);

  ProfileKind kind_;
  double length_;
  double rho_peak_;
  double center_;
  double sigma_rho_;
  double optical_depth_;
  double cross_section_;
};

/// rho(z) in um^-3; throws std::out_of_range for z outside [0, L].
double density_at(const MediumProfile& m, double z);
/// kappa(z) in um^-1; throws std::out_of_range for z outside [0, L].
double kappa_at(const MediumProfile& m, double z);

struct SuperatomCell {
  double z_start;
  double z_end;
  double n_sa;   ///< mean atom number at the cell midpoint
  double kappa;  ///< absorption coefficient at the cell midpoint

  double width() const { return z_end - z_start; }
  double z_mid() const { return 0.5 * (z_start + z_end); }
};

/// Coarse-grained chain of superatoms, one cell per blockade diameter.
struct SuperatomGrid {
  std::vector<SuperatomCell> cells;
  double r_sa = 0.0;
  MediumProfile medium;
  /// Set when the medium is shorter than one blockade diameter.
  bool degenerate = false;
};

SuperatomGrid build_grid(const MediumProfile& m, const AtomicSystem& sys);
/// Same, with an explicit blockade radius (for sensitivity studies).
SuperatomGrid build_grid(const MediumProfile& m, double r_sa);

}  // namespace rydeit
