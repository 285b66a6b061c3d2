// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "rydeit/commands.hpp"
#include "rydeit/config.hpp"
#include "rydeit/core_physics.hpp"
#include "rydeit/experiment.hpp"
#include "rydeit/medium.hpp"
#include "rydeit/propagation.hpp"
#include "rydeit/units.hpp"

using namespace rydeit;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  fmt::print("{} {:>2} {}: {} [{:.2f} s]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail, secs);
  std::fflush(stdout);
}

const RunConfig base = preset("pritchard2010");

SweepSpec fig2_spec(const RunConfig& c) { return c.make_sweep(); }

double two_photon_resonance(const RunConfig& c) { return -c.system.delta_c; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main() {
  fmt::print("preset pritchard2010: mode={}, realizations={}, seed={}\n",
             base.propagation.mode == IntegrationMode::stochastic ? "stochastic" : "continuous",
             base.sweep.realizations, base.propagation.seed);

  report(1, "derived scales", [] {
    const auto q = derived_quantities(base.system, base.make_medium());
    const bool ok = std::abs(q.blockade_radius - 6.6) <= 0.1 &&
                    std::abs(q.atoms_per_superatom - 14.7) <= 0.5;
    return Outcome{ok, fmt::format("R_sa = {:.4f} um (6.6 +/- 0.1), n_sa = {:.3f} (14.7 +/- 0.5)",
                                   q.blockade_radius, q.atoms_per_superatom)};
  });

  report(2, "group velocity", [] {
    const auto q = derived_quantities(base.system, base.make_medium());
    const bool ok = std::abs(q.group_velocity - 5.9e3) <= 0.3e3;
    return Outcome{ok, fmt::format("v = {:.1f} m/s (5900 +/- 300)", q.group_velocity)};
  });

  report(3, "weak-probe transmission", [] {
    auto cfg = base.propagation;
    cfg.mode = IntegrationMode::continuous;
    const auto medium = base.make_medium();
    const auto grid = build_grid(medium, base.system);
    const double omega_p = units::from_mhz(0.01);
    const auto d = base.system.at(two_photon_resonance(base));
    const auto stats = run_realizations({omega_p * omega_p, 1.0, 0.0}, grid, base.system, d, cfg, 1);
    // Closed form, independent of the library's polarizability code.
    const auto& s = base.system;
    const double ge = s.gamma_e_pop / 2 + s.linewidth_1ph;
    const double gr = s.gamma_r_pop / 2 + s.linewidth_2ph;
    const double dpv = two_photon_resonance(base);
    const double d2 = dpv + s.delta_c;
    const std::complex<double> i1(0.0, 1.0);
    const auto alpha =
        i1 * ge / (ge - i1 * dpv + s.omega_c * s.omega_c / (gr - i1 * d2));
    const double oracle = std::exp(-4.524 * alpha.imag());
    const double diff = std::abs(stats.transmission - oracle);
    return Outcome{diff <= 1e-3, fmt::format("T = {:.6f}, closed form {:.6f}, |diff| = {:.2e} (<= 1e-3)",
                                             stats.transmission, oracle, diff)};
  });

  report(4, "intensity trend of the EIT line", [] {
    const auto spec = fig2_spec(base);
    const auto stoch = run_sweep(spec, base.system, base.make_medium(), base.propagation);
    auto cont_cfg = base.propagation;
    cont_cfg.mode = IntegrationMode::continuous;
    const auto cont = run_sweep(spec, base.system, base.make_medium(), cont_cfg);

    std::vector<LineObservables> ls;
    std::vector<LineObservables> lc;
    for (std::size_t i = 0; i < spec.omega_p_inputs.size(); ++i) {
      const auto a = extract_line(stoch, i, base.system);
      const auto b = extract_line(cont, i, base.system);
      if (!a || !b) return Outcome{false, fmt::format("no EIT line at intensity {}", i)};
      ls.push_back(*a);
      lc.push_back(*b);
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < ls.size(); ++i) decreasing &= ls[i].t_max < ls[i - 1].t_max;
    auto spread = [](const std::vector<LineObservables>& v) {
      const auto [lo, hi] = std::minmax_element(v.begin(), v.end(), [](auto& x, auto& y) {
        return x.delta_p_max < y.delta_p_max;
      });
      return units::to_mhz(hi->delta_p_max - lo->delta_p_max);
    };
    const double shift_c = spread(lc);
    const double shift_s = spread(ls);
    const bool digitized = std::abs(ls[0].t_max - 0.725) <= 0.075;

    std::string detail = "T_max(stochastic) =";
    for (const auto& l : ls) detail += fmt::format(" {:.4f}", l.t_max);
    detail += fmt::format(" (strictly decreasing: {}); T_max(0.15 MHz) in [0.65, 0.80]: {}",
                          decreasing ? "yes" : "no", digitized ? "yes" : "no");
    detail += fmt::format("; peak shift continuous {:.4f} MHz (< 0.1), stochastic {:.4f} MHz",
                          shift_c, shift_s);
    return Outcome{decreasing && digitized && shift_c < 0.1, detail};
  });

  report(5, "g2 feedback ablation", [] {
    auto spec = fig2_spec(base);
    spec.omega_p_inputs = {units::from_mhz(1.0)};
    auto off = base.propagation;
    off.g2_feedback = false;
    const auto r_on = run_sweep(spec, base.system, base.make_medium(), base.propagation);
    const auto r_off = run_sweep(spec, base.system, base.make_medium(), off);
    const auto on_line = extract_line(r_on, 0, base.system);
    const auto off_line = extract_line(r_off, 0, base.system);
    if (!on_line || !off_line) return Outcome{false, "no EIT line"};
    const bool ok = off_line->t_max < on_line->t_max && off_line->fwhm > on_line->fwhm;
    return Outcome{ok, fmt::format("T_max on/off = {:.4f}/{:.4f}, FWHM on/off = {:.3f}/{:.3f} MHz",
                                   on_line->t_max, off_line->t_max, units::to_mhz(on_line->fwhm),
                                   units::to_mhz(off_line->fwhm))};
  });

  report(6, "antibunching at line center, bunching near +/-Omega_c", [] {
    auto spec = fig2_spec(base);
    spec.omega_p_inputs = {units::from_mhz(1.0)};
    const double oc = base.system.omega_c;
    const double dc = base.system.delta_c;
    // Line center plus a band of 0.6..1.4 Omega_c on each side.
    spec.delta_p_values = {-dc};
    for (const double f : linspace(0.6, 1.4, 41)) {
      spec.delta_p_values.push_back(-dc + f * oc);
      spec.delta_p_values.push_back(-dc - f * oc);
    }
    std::sort(spec.delta_p_values.begin(), spec.delta_p_values.end());
    const auto r = run_sweep(spec, base.system, base.make_medium(), base.propagation);
    double center = 0.0;
    double best = 0.0;
    double best_d2 = 0.0;
    for (std::size_t j = 0; j < r.delta_p_values.size(); ++j) {
      const double d2 = r.delta_p_values[j] + dc;
      const double g2 = r.at(0, j).g2_out;
      if (d2 == 0.0) {
        center = g2;
      } else if (g2 > best) {
        best = g2;
        best_d2 = d2;
      }
    }
    return Outcome{center < 1.0 && best > 1.0,
                   fmt::format("g2(L) at Delta2 = 0: {:.4f} (< 1); max g2(L) = {:.4f} at Delta2 = "
                               "{:+.3f} Omega_c (> 1)",
                               center, best, best_d2 / oc)};
  });

  report(7, "stochastic mean converges to continuous", [] {
    const auto grid = build_grid(base.make_medium(), base.system);
    const double omega_p = units::from_mhz(0.5);
    const double dp = two_photon_resonance(base);
    const auto d = base.system.at(dp);
    const FieldState in{omega_p * omega_p, 1.0, 0.0};
    auto cont_cfg = base.propagation;
    cont_cfg.mode = IntegrationMode::continuous;
    const StreamKey key{std::bit_cast<std::uint64_t>(omega_p), std::bit_cast<std::uint64_t>(dp)};
    const auto s = run_realizations(in, grid, base.system, d, base.propagation, 10000, key);
    const auto c = run_realizations(in, grid, base.system, d, cont_cfg, 1);
    const double z = std::abs(s.transmission - c.transmission) / s.transmission_stderr;
    return Outcome{z <= 3.0, fmt::format("stochastic {:.5f} +/- {:.5f}, continuous {:.5f}, "
                                         "|diff| = {:.2f} SE (<= 3)",
                                         s.transmission, s.transmission_stderr, c.transmission, z)};
  });

  report(8, "exit intensity saturates", [] {
    const auto grid = build_grid(base.make_medium(), base.system);
    const double dp = two_photon_resonance(base);
    const auto d = base.system.at(dp);
    auto exit_at = [&](double mhz, const PropagationConfig& cfg, int n) {
      const double omega_p = units::from_mhz(mhz);
      const StreamKey key{std::bit_cast<std::uint64_t>(omega_p), std::bit_cast<std::uint64_t>(dp)};
      return run_realizations({omega_p * omega_p, 1.0, 0.0}, grid, base.system, d, cfg, n, key)
          .exit_intensity;
    };
    const double ratio = exit_at(2.0, base.propagation, 2000) / exit_at(1.0, base.propagation, 2000);
    auto cont_cfg = base.propagation;
    cont_cfg.mode = IntegrationMode::continuous;
    const double ratio_c = exit_at(2.0, cont_cfg, 1) / exit_at(1.0, cont_cfg, 1);
    return Outcome{ratio < 2.0, fmt::format("i_p(L) ratio 2 MHz / 1 MHz = {:.4f} stochastic "
                                            "(2000 realizations), {:.4f} continuous (< 2)",
                                            ratio, ratio_c)};
  });

  report(9, "gaussian and homogeneous profiles agree", [] {
    const auto g = preset("pritchard2010-gaussian");
    auto cfg = base.propagation;
    cfg.mode = IntegrationMode::continuous;
    const auto spec = fig2_spec(base);
    const auto rh = run_sweep(spec, base.system, base.make_medium(), cfg);
    const auto rg = run_sweep(spec, g.system, g.make_medium(), cfg);
    double worst = 0.0;
    for (std::size_t k = 0; k < rh.points.size(); ++k)
      worst = std::max(worst, std::abs(rh.points[k].transmission - rg.points[k].transmission));
    return Outcome{worst <= 0.01,
                   fmt::format("max |T_gauss - T_homog| = {:.5f} over {} points (<= 0.01)", worst,
                               rh.points.size())};
  });

  report(10, "byte-identical spectrum.csv", [] {
    const fs::path root = fs::temp_directory_path() / "rydeit_acceptance";
    fs::remove_all(root);
    std::string runs[2];
    for (int k = 0; k < 2; ++k) {
      RunConfig c = base;
      c.output.dir = (root / std::to_string(k)).string();
      std::ostringstream log;
      if (cmd_spectrum(c, log) != 0) return Outcome{false, "spectrum command failed: " + log.str()};
      runs[k] = slurp(root / std::to_string(k) / "spectrum.csv");
    }
    fs::remove_all(root);
    const bool ok = !runs[0].empty() && runs[0] == runs[1];
    return Outcome{ok, fmt::format("{} bytes, identical: {}", runs[0].size(), ok ? "yes" : "no")};
  });

  fmt::print("{} of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
