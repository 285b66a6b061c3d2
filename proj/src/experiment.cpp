#include "rydeit/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "rydeit/units.hpp"

namespace rydeit {

void SweepSpec::validate() const {
  if (delta_p_values.empty()) throw std::invalid_argument("SweepSpec: no detunings");
  if (omega_p_inputs.empty()) throw std::invalid_argument("SweepSpec: no input intensities");
  for (std::size_t k = 1; k < delta_p_values.size(); ++k)
    if (!(delta_p_values[k] > delta_p_values[k - 1]))
      throw std::invalid_argument("SweepSpec: detunings must be strictly increasing");
  for (const double w : omega_p_inputs)
    if (!(std::isfinite(w) && w > 0.0))
      throw std::invalid_argument("SweepSpec: input Rabi frequencies must be > 0");
  if (n_realizations < 1) throw std::invalid_argument("SweepSpec: n_realizations must be >= 1");
  if (!(std::isfinite(g2_input) && g2_input >= 0.0))
    throw std::invalid_argument("SweepSpec: g2_input must be >= 0");
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("linspace: n must be >= 1");
  if (n == 1) return {lo};
  std::vector<double> v(static_cast<std::size_t>(n));
  const double step = (hi - lo) / (n - 1);
  for (int k = 0; k < n; ++k) v[k] = lo + k * step;
  v.back() = hi;
  return v;
}

std::vector<double> default_detunings() {
  return linspace(units::from_mhz(-15.0), units::from_mhz(15.0), 201);
}

std::vector<double> SpectrumResult::transmission(std::size_t intensity) const {
  std::vector<double> row(delta_p_values.size());
  for (std::size_t j = 0; j < row.size(); ++j) row[j] = at(intensity, j).transmission;
  return row;
}

std::vector<double> SpectrumResult::g2_out(std::size_t intensity) const {
  std::vector<double> row(delta_p_values.size());
  for (std::size_t j = 0; j < row.size(); ++j) row[j] = at(intensity, j).g2_out;
  return row;
}

SpectrumResult run_sweep(const SweepSpec& spec, const AtomicSystem& sys,
                         const MediumProfile& medium, const PropagationConfig& cfg,
                         SweepOptions options) {
  sys.validate();
  return run_sweep(spec, sys, build_grid(medium, sys), cfg, options);
}

SpectrumResult run_sweep(const SweepSpec& spec, const AtomicSystem& sys, const SuperatomGrid& grid,
                         const PropagationConfig& cfg, SweepOptions options) {
  spec.validate();
  sys.validate();
  cfg.validate();

  SpectrumResult result{spec.omega_p_inputs, spec.delta_p_values, {}};
  const std::size_t n_det = spec.delta_p_values.size();
  const std::size_t total = spec.omega_p_inputs.size() * n_det;
  result.points.resize(total);

  auto solve = [&](std::size_t idx) {
    const double omega_p = spec.omega_p_inputs[idx / n_det];
    const double delta_p = spec.delta_p_values[idx % n_det];
    auto& point = result.points[idx];
    try {
      const FieldState input{omega_p * omega_p, spec.g2_input, 0.0};
      const StreamKey key{std::bit_cast<std::uint64_t>(omega_p), std::bit_cast<std::uint64_t>(delta_p)};
      const auto stats = run_realizations(input, grid, sys, sys.at(delta_p), cfg,
                                          spec.n_realizations, key);
      point = {stats.transmission, stats.transmission_stderr, stats.g2_out, stats.g2_stderr,
               stats.exit_intensity, std::nullopt};
    } catch (const std::exception& e) {
      constexpr double nan = std::numeric_limits<double>::quiet_NaN();
      point = {nan, nan, nan, nan, nan, e.what()};
    }
  };

  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::max<std::size_t>(total, 1)));
  if (threads == 1) {
    for (std::size_t idx = 0; idx < total; ++idx) solve(idx);
    return result;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t idx = next++; idx < total; idx = next++) solve(idx);
    });
  pool.clear();
  return result;
}

namespace {

// Abscissa of the vertex of the parabola through three points; falls back to
// the middle point when the parabola is not concave.
double parabolic_vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
  const double hl = x0 - x1;
  const double hr = x2 - x1;
  const double dl = y0 - y1;
  const double dr = y2 - y1;
  // y - y1 = a u^2 + b u with u = x - x1
  const double denom = hl * hr * (hl - hr);
  if (denom == 0.0) return x1;
  const double a = (dl * hr - dr * hl) / denom;
  const double b = (dr * hl * hl - dl * hr * hr) / denom;
  if (!(a < 0.0)) return x1;
  return std::clamp(x1 - b / (2.0 * a), x0, x2);
}

}  // namespace

std::optional<LineObservables> extract_line(std::span<const double> delta_p,
                                            std::span<const double> transmission,
                                            double delta_c, double window) {
  if (delta_p.size() != transmission.size())
    throw std::invalid_argument("extract_line: detuning and transmission sizes differ");

  std::size_t first = delta_p.size();
  std::size_t last = 0;
  for (std::size_t k = 0; k < delta_p.size(); ++k) {
    if (std::abs(delta_p[k] + delta_c) < window) {
      first = std::min(first, k);
      last = k;
    }
  }
  if (first >= delta_p.size() || last < first + 2) return std::nullopt;
  for (std::size_t k = first; k <= last; ++k)
    if (!std::isfinite(transmission[k])) return std::nullopt;

  std::size_t peak = first;
  for (std::size_t k = first; k <= last; ++k)
    if (transmission[k] > transmission[peak]) peak = k;
  if (peak == first || peak == last) return std::nullopt;

  const double t_max = transmission[peak];
  const double left_min = *std::min_element(transmission.begin() + first, transmission.begin() + peak);
  const double right_min = *std::min_element(transmission.begin() + peak + 1, transmission.begin() + last + 1);
  const double background = std::max(left_min, right_min);
  if (!(t_max > background)) return std::nullopt;
  const double half = 0.5 * (t_max + background);

  auto crossing = [&](std::size_t below, std::size_t above) {
    const double t0 = transmission[below];
    const double t1 = transmission[above];
    return delta_p[below] + (half - t0) / (t1 - t0) * (delta_p[above] - delta_p[below]);
  };
  std::size_t j = peak;
  while (transmission[j] > half) --j;
  const double left = crossing(j, j + 1);
  j = peak;
  while (transmission[j] > half) ++j;
  const double right = crossing(j, j - 1);

  const double position =
      parabolic_vertex(delta_p[peak - 1], transmission[peak - 1], delta_p[peak], t_max,
                       delta_p[peak + 1], transmission[peak + 1]);
  return LineObservables{t_max, right - left, position};
}

std::optional<LineObservables> extract_line(const SpectrumResult& result, std::size_t intensity,
                                            const AtomicSystem& sys, std::optional<double> window) {
  const auto row = result.transmission(intensity);
  return extract_line(result.delta_p_values, row, sys.delta_c, window.value_or(sys.omega_c));
}

double photon_density(const AtomicSystem& sys, double atom_density, double i_p) {
  return 0.25 * atom_density * i_p / (sys.omega_c * sys.omega_c);
}

double group_velocity(const AtomicSystem& sys, double kappa) {
  const double gamma_e = transverse_rates(sys).gamma_e;
  return 2.0 * sys.omega_c * sys.omega_c / (kappa * gamma_e) * 1e-6;
}

DerivedQuantities derived_quantities(const AtomicSystem& sys, const MediumProfile& medium) {
  DerivedQuantities q{};
  q.blockade_radius = blockade_radius(sys);
  q.superatom_volume = superatom_volume(q.blockade_radius);
  q.superatom_density = superatom_density(sys);
  q.mean_density = medium.mean_density();
  q.atoms_per_superatom = q.mean_density * q.superatom_volume;
  q.mean_kappa = medium.mean_kappa();
  q.optical_depth = medium.optical_depth();
  q.eit_half_width = eit_half_width(sys);
  q.group_velocity = group_velocity(sys, q.mean_kappa);
  q.saturation_intensity = 4.0 * q.superatom_density / q.mean_density * sys.omega_c * sys.omega_c;
  q.saturation_rabi = std::sqrt(q.saturation_intensity);
  q.antibunching_window = 2.0 * q.blockade_radius * 1e-6 / q.group_velocity;
  return q;
}

}  // namespace rydeit
