#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "skg/rng.hpp"
#include "skg/waveform.hpp"

namespace skg {

struct ChannelTap {
  std::complex<double> amplitude;
  double delay_s = 0.0;
};

/// Tapped-delay-line impulse response h(t) = sum_i a_i * delta(t - tau_i).
struct MultipathChannel {
  std::vector<ChannelTap> taps;  // ordered by strictly increasing delay

  void validate() const;
};

/// Knobs describing one measurement scenario (LoS/NLoS x static/dynamic).
struct ScenarioConfig {
  bool los = false;
  bool dynamic = false;
  double snr_db = 20.0;
  int num_taps = 8;                    // L
  double delay_spread_s = 200e-9;
  double eve_offset_wavelengths = 10.0;
  double carrier_freq_hz = 3.75e9;     // lambda = c0 / f_c for Eve placement
  double rician_k_db = 10.0;           // LoS deterministic-tap power / diffuse power
  double diffuse_power = 1.0;          // total mean power of the diffuse profile
  std::uint64_t rng_seed = 1;

  void validate() const;
};

/// Temporal model: static mode keeps one realization for all frames, dynamic
/// mode redraws every coherence_frames frames (block fading).
struct FrameSchedule {
  std::size_t num_frames = 1000;
  std::size_t coherence_frames = 1;

  void validate() const;
};

/// Draws one channel realization. NLoS taps are circular complex Gaussian
/// with an exponential power-delay profile over delay_spread_s; the first
/// tap sits at delay 0. In LoS mode the first tap additionally carries a
/// deterministic component of power K_lin * diffuse_power (Rician).
MultipathChannel sample_channel(const ScenarioConfig& cfg, Rng& rng);

/// Draws Eve's channel with per-tap amplitude correlation
/// rho = clamp(J0(2*pi*d/lambda), 0, 1) against the legitimate realization;
/// delays are shared. d = 0 reproduces the legitimate channel exactly.
MultipathChannel sample_eve_channel(const ScenarioConfig& cfg, const MultipathChannel& legit,
                                    Rng& rng);

/// Convolves x with h (delays rounded to the nearest sample; the fractional
/// remainder becomes a carrier-phase rotation exp(-j*2*pi*f_c*tau_frac)) and
/// adds i.i.d. circular complex Gaussian noise of variance noise_var per
/// sample. Output length = |x| + max integer delay.
ComplexSignal apply_channel(const ComplexSignal& x, const MultipathChannel& h, double noise_var,
                            Rng& rng, double carrier_freq_hz = 0.0);

/// Per-tap amplitude correlation coefficient implied by the Eve offset.
double eve_correlation(const ScenarioConfig& cfg);

/// Mean total tap power E[sum |a_i|^2]: diffuse_power, plus the
/// deterministic LoS share K_lin * diffuse_power when los is set.
double total_channel_power(const ScenarioConfig& cfg);

/// Reference mean received power (per sample) used as the SNR anchor:
/// diffuse_power / T^2. The anchor deliberately excludes the LoS bonus so
/// that scenarios at equal snr_db share one transmit/noise setting and LoS
/// gains effective SNR, as in the measured setup.
double reference_received_power(const ScenarioConfig& cfg, const ChirpSpec& chirp);

/// Noise variance realizing cfg.snr_db against reference_received_power.
double noise_variance_for_snr(const ScenarioConfig& cfg, const ChirpSpec& chirp);

}  // namespace skg
