#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "rydeit/config.hpp"
#include "rydeit/experiment.hpp"
#include "rydeit/propagation.hpp"

// File formats and subcommand bodies behind the command-line tool.
namespace rydeit {

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* spectrum_csv_header =
    "omega_p_in_MHz,delta_p_MHz,transmission,transmission_stderr,g2_out,g2_stderr";
inline constexpr const char* trace_csv_header =
    "cell,z_mid_um,p_excited,p_unconditional,sampled,alpha_re,alpha_im,i_p_rad2_per_s2,g2";

/// One row per (intensity, detuning) in row-major order, 9 significant digits.
void write_spectrum_csv(const SpectrumResult& result, std::ostream& out);
void write_trace_csv(const PropagationTrace& trace, std::ostream& out);

/// Aligned `name = value unit` lines.
std::string format_derived(const DerivedQuantities& q, const RunConfig& config);
std::string derived_json(const DerivedQuantities& q, const RunConfig& config);

/// Writes through a temporary sibling file and renames it into place; nothing
/// is left behind on failure.
void write_file(const std::filesystem::path& path, const std::string& content);

/// Each returns the process exit status: 0 on success, nonzero when any error
/// path was taken. Diagnostics go to `log`.
int cmd_spectrum(const RunConfig& config, std::ostream& log, SweepOptions options = {});
int cmd_derived(const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_propagate(const RunConfig& config, double omega_p, double delta_p, std::ostream& log);

}  // namespace rydeit
