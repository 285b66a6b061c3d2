#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "rydeit/core_physics.hpp"
#include "rydeit/medium.hpp"

namespace rydeit {

/// Probe intensity (squared Rabi frequency, rad^2/s^2) and equal-position
/// two-photon correlation at position z (um).
struct FieldState {
  double i_p = 0.0;
  double g2 = 1.0;
  double z = 0.0;
};

enum class IntegrationMode { stochastic, continuous };

/// Which Rydberg population weights the g2 decay in continuous mode. The
/// conditional population (intensity times g2) matches the mean of the sampled
/// excitations, so continuous mode is then the limit of many stochastic
/// realizations.
enum class G2DecayWeight { conditional, unconditional };

struct PropagationConfig {
  IntegrationMode mode = IntegrationMode::continuous;
  std::uint64_t seed = 0;
  int substeps = 4;
  /// When false, g2 is pinned to 1 along the whole medium.
  bool g2_feedback = true;
  G2DecayWeight g2_weight = G2DecayWeight::conditional;

  void validate() const;
  bool operator==(const PropagationConfig&) const = default;
};

/// Uniform [0, 1) source on top of std::mt19937_64, whose output sequence is
/// fixed by the standard. Uniforms are built from the top 53 bits of each draw
/// so the stream is identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed of an independent stream: h = mix64(seed); h = mix64(h ^ mix64(k)) for
/// every key k in order.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

struct TraceRecord {
  double z_mid;
  double p_excited;        ///< conditional Rydberg population at cell entry
  double p_unconditional;  ///< unconditional population at cell entry
  std::optional<bool> sampled;
  std::complex<double> alpha_used;
  double i_p;  ///< at cell exit
  double g2;   ///< at cell exit
};

using PropagationTrace = std::vector<TraceRecord>;

class PropagationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CellStep {
  FieldState exit;
  TraceRecord record;
};

/// Advances the field across one superatom cell. Rydberg populations and
/// polarizabilities are frozen at cell entry; the intensity and g2 then follow
/// exact exponential decay over cfg.substeps sub-intervals with kappa taken at
/// each sub-interval midpoint. The rng is only consumed in stochastic mode.
CellStep step_cell(const FieldState& state, const SuperatomCell& cell, const MediumProfile& medium,
                   const AtomicSystem& sys, const DetuningPoint& d, const PropagationConfig& cfg,
                   Rng& rng);

struct PropagationResult {
  FieldState exit;
  PropagationTrace trace;
};

PropagationResult propagate(const FieldState& input, const SuperatomGrid& grid,
                            const AtomicSystem& sys, const DetuningPoint& d,
                            const PropagationConfig& cfg, Rng& rng);

/// Identifies the random streams of one sweep point.
struct StreamKey {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
};

struct RealizationStats {
  double transmission;
  double transmission_stderr;
  double g2_out;
  double g2_stderr;
  double exit_intensity;
  double exit_intensity_stderr;
  int realizations;
};

/// Averages n_real independent stochastic realizations; realization r draws
/// from Rng(derive_stream_seed(cfg.seed, {key.a, key.b, r})). Continuous mode
/// propagates once and reports zero standard errors. Stochastic runs with a
/// single realization report NaN standard errors.
RealizationStats run_realizations(const FieldState& input, const SuperatomGrid& grid,
                                  const AtomicSystem& sys, const DetuningPoint& d,
                                  const PropagationConfig& cfg, int n_real, StreamKey key = {});

}  // namespace rydeit
