#include "rydeit/commands.hpp"

#include <bit>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

#include <fmt/core.h>
#include <json.hpp>

#include "rydeit/units.hpp"

namespace rydeit {

namespace fs = std::filesystem;

void write_spectrum_csv(const SpectrumResult& result, std::ostream& out) {
  out << spectrum_csv_header << '\n';
  for (std::size_t i = 0; i < result.omega_p_inputs.size(); ++i) {
    for (std::size_t j = 0; j < result.delta_p_values.size(); ++j) {
      const auto& p = result.at(i, j);
      out << fmt::format("{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g}\n",
                         units::to_mhz(result.omega_p_inputs[i]),
                         units::to_mhz(result.delta_p_values[j]), p.transmission,
                         p.transmission_stderr, p.g2_out, p.g2_stderr);
    }
  }
}

void write_trace_csv(const PropagationTrace& trace, std::ostream& out) {
  out << trace_csv_header << '\n';
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const auto& r = trace[k];
    const char* sampled = r.sampled ? (*r.sampled ? "1" : "0") : "";
    out << fmt::format("{},{:.9g},{:.9g},{:.9g},{},{:.9g},{:.9g},{:.9g},{:.9g}\n", k, r.z_mid,
                       r.p_excited, r.p_unconditional, sampled, r.alpha_used.real(),
                       r.alpha_used.imag(), r.i_p, r.g2);
  }
}

std::string format_derived(const DerivedQuantities& q, const RunConfig& config) {
  std::string out;
  auto row = [&out](std::string_view name, double value, std::string_view unit) {
    out += fmt::format("{:<24} = {:<14.6g} {}\n", name, value, unit);
  };
  row("R_sa", q.blockade_radius, "um");
  row("V_sa", q.superatom_volume / units::um3_per_mm3, "mm^3");
  row("rho_sa", units::per_um3_to_per_mm3(q.superatom_density), "mm^-3");
  row("rho_mean", units::per_um3_to_per_mm3(q.mean_density), "mm^-3");
  row("n_sa", q.atoms_per_superatom, "atoms");
  row("kappa_mean", q.mean_kappa, "um^-1");
  row("optical_depth", q.optical_depth, "");
  row("w/2pi", units::to_mhz(q.eit_half_width), "MHz");
  row("v_group", q.group_velocity, "m/s");
  row("I_p_max", q.saturation_intensity, "rad^2/s^2");
  row("Omega_p_max/2pi", units::to_mhz(q.saturation_rabi), "MHz");
  row("dt_antibunch", q.antibunching_window * 1e9, "ns");
  out += fmt::format("{:<24} = {:<14.6g} {}\n", "dt_antibunch_quoted", quoted_antibunching_window * 1e9,
                     "ns (literature estimate; differs from 2 R_sa / v)");
  for (const double omega_p : config.sweep.omega_p_inputs) {
    const double rho_phot = photon_density(config.system, q.mean_density, omega_p * omega_p);
    row(fmt::format("rho_phot({:g} MHz)", units::to_mhz(omega_p)),
        units::per_um3_to_per_mm3(rho_phot), "mm^-3");
  }
  return out;
}

std::string derived_json(const DerivedQuantities& q, const RunConfig& config) {
  nlohmann::ordered_json j;
  j["blockade_radius_um"] = q.blockade_radius;
  j["superatom_volume_mm3"] = q.superatom_volume / units::um3_per_mm3;
  j["superatom_density_mm3"] = units::per_um3_to_per_mm3(q.superatom_density);
  j["mean_density_mm3"] = units::per_um3_to_per_mm3(q.mean_density);
  j["atoms_per_superatom"] = q.atoms_per_superatom;
  j["mean_kappa_per_um"] = q.mean_kappa;
  j["optical_depth"] = q.optical_depth;
  j["eit_half_width_MHz"] = units::to_mhz(q.eit_half_width);
  j["group_velocity_m_s"] = q.group_velocity;
  j["saturation_intensity_rad2_s2"] = q.saturation_intensity;
  j["saturation_rabi_MHz"] = units::to_mhz(q.saturation_rabi);
  j["antibunching_window_ns"] = q.antibunching_window * 1e9;
  j["quoted_antibunching_window_ns"] = quoted_antibunching_window * 1e9;
  auto& phot = j["photon_density_mm3"] = nlohmann::ordered_json::array();
  for (const double omega_p : config.sweep.omega_p_inputs) {
    const double rho_phot = photon_density(config.system, q.mean_density, omega_p * omega_p);
    phot.push_back({{"omega_p_MHz", units::to_mhz(omega_p)},
                    {"density", units::per_um3_to_per_mm3(rho_phot)}});
  }
  return j.dump(2) + "\n";
}

void write_file(const fs::path& path, const std::string& content) {
  fs::path partial = path;
  partial += ".partial";
  auto cleanup = [&] {
    std::error_code ignored;
    fs::remove(partial, ignored);
  };
  {
    std::ofstream out(partial, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError(fmt::format("cannot open {} for writing", partial.string()));
    out << content;
    out.flush();
    if (!out) {
      cleanup();
      throw OutputError(fmt::format("failed writing {}", partial.string()));
    }
  }
  std::error_code ec;
  fs::rename(partial, path, ec);
  if (ec) {
    cleanup();
    throw OutputError(fmt::format("cannot move output into {}: {}", path.string(), ec.message()));
  }
}

namespace {

fs::path prepare_dir(const RunConfig& config) {
  const fs::path dir = config.output.dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw OutputError(fmt::format("cannot create output directory {}", dir.string()));
  return dir;
}

}  // namespace

int cmd_spectrum(const RunConfig& config, std::ostream& log, SweepOptions options) {
  try {
    config.validate();
    const auto result = run_sweep(config.make_sweep(), config.system, config.make_medium(),
                                  config.propagation, options);
    std::ostringstream csv;
    write_spectrum_csv(result, csv);
    const auto path = prepare_dir(config) / "spectrum.csv";
    write_file(path, csv.str());

    int failed = 0;
    for (std::size_t k = 0; k < result.points.size(); ++k) {
      if (!result.points[k].error) continue;
      ++failed;
      log << fmt::format("point {}: {}\n", k, *result.points[k].error);
    }
    log << fmt::format("wrote {} ({} rows)\n", path.string(), result.points.size());
    if (failed) {
      log << fmt::format("error: {} sweep point(s) failed\n", failed);
      return 3;
    }
    for (std::size_t i = 0; i < result.omega_p_inputs.size(); ++i) {
      const auto line = extract_line(result, i, config.system, config.line_window());
      const double in_mhz = units::to_mhz(result.omega_p_inputs[i]);
      if (line)
        log << fmt::format("Omega_p(0)/2pi = {:g} MHz: T_max = {:.4f}, FWHM = {:.4f} MHz, "
                           "Delta_p^max = {:.4f} MHz\n",
                           in_mhz, line->t_max, units::to_mhz(line->fwhm),
                           units::to_mhz(line->delta_p_max));
      else
        log << fmt::format("Omega_p(0)/2pi = {:g} MHz: no EIT line in window\n", in_mhz);
    }
    return 0;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return 2;
  }
}

int cmd_derived(const RunConfig& config, std::ostream& out, std::ostream& log) {
  try {
    config.validate();
    const auto q = derived_quantities(config.system, config.make_medium());
    const auto text = format_derived(q, config);
    out << text;
    const auto dir = prepare_dir(config);
    write_file(dir / "derived.txt", text);
    if (config.output.json) write_file(dir / "derived.json", derived_json(q, config));
    return 0;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return 2;
  }
}

int cmd_propagate(const RunConfig& config, double omega_p, double delta_p, std::ostream& log) {
  try {
    config.validate();
    if (!(omega_p >= 0.0)) throw std::invalid_argument("omega_p must be >= 0");
    const auto grid = build_grid(config.make_medium(), config.system);
    const FieldState input{omega_p * omega_p, config.sweep.g2_input, 0.0};
    Rng rng(derive_stream_seed(config.propagation.seed, {std::bit_cast<std::uint64_t>(omega_p),
                                                         std::bit_cast<std::uint64_t>(delta_p), 0}));
    const auto result = propagate(input, grid, config.system, config.system.at(delta_p),
                                  config.propagation, rng);
    std::ostringstream csv;
    write_trace_csv(result.trace, csv);
    const auto path = prepare_dir(config) / "trace.csv";
    write_file(path, csv.str());
    log << fmt::format("wrote {} ({} cells{}); exit i_p = {:.6g} rad^2/s^2, g2 = {:.6g}\n",
                       path.string(), result.trace.size(), grid.degenerate ? ", degenerate grid" : "",
                       result.exit.i_p, result.exit.g2);
    return 0;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace rydeit
