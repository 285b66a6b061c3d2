#include "rydeit/propagation.hpp"

#include <cmath>
#include <limits>

#include <fmt/core.h>

namespace rydeit {

void PropagationConfig::validate() const {
  if (substeps < 1) throw std::invalid_argument("PropagationConfig: substeps must be >= 1");
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = mix64(seed);
  for (const auto k : keys) h = mix64(h ^ mix64(k));
  return h;
}

CellStep step_cell(const FieldState& state, const SuperatomCell& cell, const MediumProfile& medium,
                   const AtomicSystem& sys, const DetuningPoint& d, const PropagationConfig& cfg,
                   Rng& rng) {
  if (std::abs(state.z - cell.z_start) > 1e-9 * (1.0 + std::abs(cell.z_start)))
    throw std::invalid_argument(
        fmt::format("step_cell: state at z = {} um, cell starts at {} um", state.z, cell.z_start));

  const double g2_seen = cfg.g2_feedback ? state.g2 : 1.0;
  const double p_uncond = sigma_rr(sys, d, cell.n_sa, state.i_p);
  const double p_cond = sigma_rr(sys, d, cell.n_sa, state.i_p * g2_seen);

  const double shift = mean_field_shift(sys, p_uncond);
  const Polarizability tla = alpha_tla(sys, d);
  const Polarizability eit = alpha_eit(sys, d, shift);
  const double contrast = tla.absorption() - eit.absorption();

  Polarizability alpha{};
  double weight = 0.0;
  std::optional<bool> sampled;
  if (cfg.mode == IntegrationMode::stochastic) {
    const bool excited = rng.uniform() < p_cond;
    sampled = excited;
    alpha = excited ? tla : eit;
    weight = excited ? 1.0 : 0.0;
  } else {
    alpha = alpha_conditional(tla, eit, p_cond);
    weight = cfg.g2_weight == G2DecayWeight::unconditional ? p_uncond : p_cond;
  }

  FieldState next = state;
  const double dz = cell.width() / cfg.substeps;
  for (int k = 0; k < cfg.substeps; ++k) {
    const double z_mid = std::min(cell.z_start + (k + 0.5) * dz, medium.length());
    const double kappa = kappa_at(medium, z_mid);
    next.i_p *= std::exp(-kappa * alpha.absorption() * dz);
    if (cfg.g2_feedback) next.g2 *= std::exp(-kappa * weight * contrast * dz);
  }
  if (!cfg.g2_feedback) next.g2 = 1.0;
  next.z = cell.z_end;

  if (!std::isfinite(next.i_p) || !std::isfinite(next.g2) || !std::isfinite(p_cond) ||
      !std::isfinite(p_uncond))
    throw PropagationError(fmt::format(
        "non-finite field in cell [{}, {}] um: i_p = {}, g2 = {}, p_c = {}, p_u = {}",
        cell.z_start, cell.z_end, next.i_p, next.g2, p_cond, p_uncond));

  return {next, {cell.z_mid(), p_cond, p_uncond, sampled, alpha.value, next.i_p, next.g2}};
}

PropagationResult propagate(const FieldState& input, const SuperatomGrid& grid,
                            const AtomicSystem& sys, const DetuningPoint& d,
                            const PropagationConfig& cfg, Rng& rng) {
  cfg.validate();
  if (input.z != 0.0) throw std::invalid_argument("propagate: input must sit at z = 0");
  if (!(input.i_p >= 0.0) || !(input.g2 >= 0.0))
    throw std::invalid_argument("propagate: input i_p and g2 must be >= 0");

  PropagationResult result{input, {}};
  result.trace.reserve(grid.cells.size());
  for (const auto& cell : grid.cells) {
    auto step = step_cell(result.exit, cell, grid.medium, sys, d, cfg, rng);
    result.exit = step.exit;
    result.trace.push_back(step.record);
  }
  return result;
}

namespace {

struct MeanAndError {
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
  }
  double mean(int n) const { return sum / n; }
  double stderr_of_mean(int n) const {
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    const double m = mean(n);
    const double var = std::max(0.0, (sum_sq - n * m * m) / (n - 1));
    return std::sqrt(var / n);
  }
};

}  // namespace

RealizationStats run_realizations(const FieldState& input, const SuperatomGrid& grid,
                                  const AtomicSystem& sys, const DetuningPoint& d,
                                  const PropagationConfig& cfg, int n_real, StreamKey key) {
  if (n_real < 1) throw std::invalid_argument("run_realizations: n_real must be >= 1");
  if (!(input.i_p > 0.0))
    throw std::invalid_argument("run_realizations: transmission needs input i_p > 0");

  if (cfg.mode == IntegrationMode::continuous) {
    Rng unused(cfg.seed);
    const auto out = propagate(input, grid, sys, d, cfg, unused).exit;
    return {out.i_p / input.i_p, 0.0, out.g2, 0.0, out.i_p, 0.0, 1};
  }

  MeanAndError transmission, g2, intensity;
  for (int r = 0; r < n_real; ++r) {
    Rng rng(derive_stream_seed(cfg.seed, {key.a, key.b, static_cast<std::uint64_t>(r)}));
    const auto out = propagate(input, grid, sys, d, cfg, rng).exit;
    transmission.add(out.i_p / input.i_p);
    g2.add(out.g2);
    intensity.add(out.i_p);
  }
  return {transmission.mean(n_real), transmission.stderr_of_mean(n_real),
          g2.mean(n_real),           g2.stderr_of_mean(n_real),
          intensity.mean(n_real),    intensity.stderr_of_mean(n_real),
          n_real};
}

}  // namespace rydeit
