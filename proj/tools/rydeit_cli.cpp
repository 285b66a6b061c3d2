// Command-line front end: steady-state probe propagation through a Rydberg
// EIT medium.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rydeit/commands.hpp"
#include "rydeit/config.hpp"
#include "rydeit/units.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::string preset_name;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<int> realizations;
  std::optional<std::string> out_dir;
  std::optional<std::string> g2_feedback;
  std::optional<unsigned> threads;
  bool json = false;
};

rydeit::RunConfig load(const Overrides& o) {
  using rydeit::ConfigError;
  if (o.config_path.empty() && o.preset_name.empty())
    throw ConfigError("one of --config <path> or --preset <name> is required");

  rydeit::RunConfig config;
  if (o.config_path.empty()) {
    config = rydeit::preset(o.preset_name);
  } else {
    std::ifstream in(o.config_path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + o.config_path);
    std::ostringstream text;
    if (!o.preset_name.empty()) text << "preset = " << o.preset_name << '\n';
    text << in.rdbuf();
    config = rydeit::parse_config(text.str());
  }

  if (o.seed) config.propagation.seed = *o.seed;
  if (o.mode)
    config.propagation.mode = *o.mode == "stochastic" ? rydeit::IntegrationMode::stochastic
                                                      : rydeit::IntegrationMode::continuous;
  if (o.realizations) config.sweep.realizations = *o.realizations;
  if (o.out_dir) config.output.dir = *o.out_dir;
  if (o.g2_feedback) config.propagation.g2_feedback = *o.g2_feedback == "on";
  if (o.json) config.output.json = true;
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rydberg-EIT probe propagation with superatom coarse-graining"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  app.add_option("--config", o.config_path, "Run configuration file (INI sections)");
  app.add_option("--preset", o.preset_name, "Built-in parameter set")
      ->check(CLI::IsMember(rydeit::preset_names()));
  app.add_option("--seed", o.seed, "Master PRNG seed");
  app.add_option("--mode", o.mode, "Integration mode")
      ->check(CLI::IsMember({"stochastic", "continuous"}));
  app.add_option("--realizations", o.realizations, "Realizations per sweep point")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", o.out_dir, "Output directory");
  app.add_option("--g2-feedback", o.g2_feedback, "Evolve g2 (on) or pin it to 1 (off)")
      ->check(CLI::IsMember({"on", "off"}));
  app.add_option("--threads", o.threads, "Worker threads for sweeps (0 = all cores)");
  app.add_flag("--json", o.json, "Also write derived.json");

  auto* spectrum = app.add_subcommand("spectrum", "Transmission and g2 spectra -> spectrum.csv");
  auto* derived = app.add_subcommand("derived", "Derived scales -> derived.txt");
  auto* trace = app.add_subcommand("propagate", "Single-point cell trace -> trace.csv");
  double omega_p_mhz = -1.0;
  std::optional<double> delta_p_mhz;
  trace->add_option("--omega-p", omega_p_mhz, "Input probe Rabi frequency / 2pi [MHz]")
      ->check(CLI::NonNegativeNumber);
  trace->add_option("--delta-p", delta_p_mhz, "Probe detuning / 2pi [MHz] (default: two-photon resonance)");

  CLI11_PARSE(app, argc, argv);

  rydeit::RunConfig config;
  try {
    config = load(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  if (spectrum->parsed()) {
    rydeit::SweepOptions options;
    if (o.threads) options.threads = *o.threads;
    return rydeit::cmd_spectrum(config, std::cerr, options);
  }
  if (derived->parsed()) return rydeit::cmd_derived(config, std::cout, std::cerr);

  const double omega_p = omega_p_mhz >= 0.0 ? rydeit::units::from_mhz(omega_p_mhz)
                                            : config.sweep.omega_p_inputs.front();
  const double delta_p = delta_p_mhz ? rydeit::units::from_mhz(*delta_p_mhz) : -config.system.delta_c;
  return rydeit::cmd_propagate(config, omega_p, delta_p, std::cerr);
}
