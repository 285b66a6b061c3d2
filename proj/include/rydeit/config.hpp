#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rydeit/core_physics.hpp"
#include "rydeit/experiment.hpp"
#include "rydeit/medium.hpp"
#include "rydeit/propagation.hpp"
#include "rydeit/units.hpp"

namespace rydeit {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MediumSettings {
  ProfileKind kind = ProfileKind::homogeneous;
  double length = 0.0;            ///< um
  double density = 0.0;           ///< um^-3, peak density for a Gaussian
  std::optional<double> center;   ///< um, Gaussian only; defaults to length / 2
  double sigma = 0.0;             ///< um, Gaussian only
  double optical_depth = 0.0;

  bool operator==(const MediumSettings&) const = default;
};

struct SweepSettings {
  double delta_p_min = units::from_mhz(-15.0);  ///< rad/s
  double delta_p_max = units::from_mhz(15.0);   ///< rad/s
  int delta_p_points = 201;
  std::vector<double> omega_p_inputs;   ///< rad/s
  int realizations = 10;
  double g2_input = 1.0;
  std::optional<double> line_window;    ///< rad/s; defaults to omega_c

  bool operator==(const SweepSettings&) const = default;
};

struct OutputSettings {
  std::string dir = ".";
  bool json = false;

  bool operator==(const OutputSettings&) const = default;
};

/// Complete run description. Stored in internal units (rad/s, um, um^-3)
/// regardless of the units used in the file it was read from.
struct RunConfig {
  AtomicSystem system;
  MediumSettings medium;
  SweepSettings sweep;
  PropagationConfig propagation;
  OutputSettings output;

  void validate() const;
  MediumProfile make_medium() const;
  SweepSpec make_sweep() const;
  double line_window() const { return sweep.line_window.value_or(system.omega_c); }

  bool operator==(const RunConfig&) const = default;
};

/// Names accepted by preset().
std::vector<std::string> preset_names();

/// Built-in parameter sets. "pritchard2010" is the cold 87Rb / 60S ensemble
/// (homogeneous medium); "pritchard2010-gaussian" swaps in the Gaussian cloud.
RunConfig preset(std::string_view name);

/// Parses INI-style text with sections [system], [medium], [sweep],
/// [propagation] and [output]. A top-level `preset = <name>` key seeds every
/// field, later keys override it. Dimensioned values need a unit suffix.
/// Unknown sections or keys are rejected.
RunConfig parse_config(std::string_view text);

/// Text that parse_config() maps back to an equal RunConfig.
std::string serialize_config(const RunConfig& config);

}  // namespace rydeit
