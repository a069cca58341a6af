#include "skg/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace skg {

namespace {

double rician_k_linear(const ScenarioConfig& cfg) {
  return std::pow(10.0, cfg.rician_k_db / 10.0);
}

/// Per-tap diffuse variances: exponential profile over the realized delays,
/// normalized so they sum to cfg.diffuse_power. Zero spread means a flat
/// profile.
std::vector<double> diffuse_profile(const ScenarioConfig& cfg, const std::vector<double>& delays) {
  std::vector<double> w(delays.size());
  if (cfg.delay_spread_s > 0.0) {
    for (std::size_t i = 0; i < delays.size(); ++i) {
      w[i] = std::exp(-delays[i] / cfg.delay_spread_s);
    }
  } else {
    std::fill(w.begin(), w.end(), 1.0);
  }
  double sum = 0.0;
  for (double v : w) sum += v;
  for (double& v : w) v *= cfg.diffuse_power / sum;
  return w;
}

std::vector<double> draw_delays(const ScenarioConfig& cfg, Rng& rng) {
  std::vector<double> delays(static_cast<std::size_t>(cfg.num_taps), 0.0);
  for (std::size_t i = 1; i < delays.size(); ++i) {
    delays[i] = rng.uniform() * cfg.delay_spread_s;
  }
  std::sort(delays.begin() + 1, delays.end());
  // Enforce strictly increasing delays (coincident draws have measure zero
  // but delay_spread_s = 0 collapses everything onto tap 0).
  const double step = std::max(cfg.delay_spread_s, 1e-12) * 1e-9;
  for (std::size_t i = 1; i < delays.size(); ++i) {
    if (delays[i] <= delays[i - 1]) delays[i] = delays[i - 1] + step;
  }
  return delays;
}

double los_amplitude(const ScenarioConfig& cfg) {
  return std::sqrt(rician_k_linear(cfg) * cfg.diffuse_power);
}

}  // namespace

void MultipathChannel::validate() const {
  if (taps.empty()) throw std::invalid_argument("MultipathChannel: needs at least one tap");
  bool any_nonzero = false;
  for (std::size_t i = 0; i < taps.size(); ++i) {
    if (taps[i].delay_s < 0.0) throw std::invalid_argument("MultipathChannel: negative delay");
    if (i > 0 && !(taps[i].delay_s > taps[i - 1].delay_s)) {
      throw std::invalid_argument("MultipathChannel: delays must be strictly increasing");
    }
    if (std::norm(taps[i].amplitude) > 0.0) any_nonzero = true;
  }
  if (!any_nonzero) throw std::invalid_argument("MultipathChannel: all taps are zero");
}

void ScenarioConfig::validate() const {
  if (num_taps < 1) throw std::invalid_argument("ScenarioConfig: num_taps must be >= 1");
  if (delay_spread_s < 0.0) throw std::invalid_argument("ScenarioConfig: delay_spread_s must be >= 0");
  if (eve_offset_wavelengths < 0.0) {
    throw std::invalid_argument("ScenarioConfig: eve_offset_wavelengths must be >= 0");
  }
  if (!(carrier_freq_hz > 0.0)) throw std::invalid_argument("ScenarioConfig: carrier_freq_hz must be > 0");
  if (!(diffuse_power > 0.0)) throw std::invalid_argument("ScenarioConfig: diffuse_power must be > 0");
}

void FrameSchedule::validate() const {
  if (num_frames < 1) throw std::invalid_argument("FrameSchedule: num_frames must be >= 1");
  if (coherence_frames < 1) throw std::invalid_argument("FrameSchedule: coherence_frames must be >= 1");
}

MultipathChannel sample_channel(const ScenarioConfig& cfg, Rng& rng) {
  cfg.validate();
  const auto delays = draw_delays(cfg, rng);
  const auto var = diffuse_profile(cfg, delays);

  MultipathChannel h;
  h.taps.resize(delays.size());
  for (std::size_t i = 0; i < delays.size(); ++i) {
    h.taps[i].delay_s = delays[i];
    h.taps[i].amplitude = rng.cgaussian(var[i]);
  }
  if (cfg.los) h.taps[0].amplitude += los_amplitude(cfg);
  return h;
}

MultipathChannel sample_eve_channel(const ScenarioConfig& cfg, const MultipathChannel& legit,
                                    Rng& rng) {
  cfg.validate();
  legit.validate();
  if (legit.taps.size() != static_cast<std::size_t>(cfg.num_taps)) {
    throw std::invalid_argument("sample_eve_channel: tap count mismatch with config");
  }
  const double rho = eve_correlation(cfg);
  const double mix = std::sqrt(std::max(0.0, 1.0 - rho * rho));

  std::vector<double> delays(legit.taps.size());
  for (std::size_t i = 0; i < delays.size(); ++i) delays[i] = legit.taps[i].delay_s;
  const auto var = diffuse_profile(cfg, delays);

  MultipathChannel he;
  he.taps.resize(legit.taps.size());
  for (std::size_t i = 0; i < legit.taps.size(); ++i) {
    std::complex<double> det(0.0, 0.0);
    if (cfg.los && i == 0) det = los_amplitude(cfg);
    const std::complex<double> diffuse = legit.taps[i].amplitude - det;
    he.taps[i].delay_s = delays[i];
    he.taps[i].amplitude = det + rho * diffuse + mix * rng.cgaussian(var[i]);
  }
  return he;
}

ComplexSignal apply_channel(const ComplexSignal& x, const MultipathChannel& h, double noise_var,
                            Rng& rng, double carrier_freq_hz) {
  if (x.samples.empty() || !(x.sample_rate_hz > 0.0)) {
    throw std::invalid_argument("apply_channel: invalid input signal");
  }
  h.validate();
  if (noise_var < 0.0) throw std::invalid_argument("apply_channel: noise_var must be >= 0");

  const double fs = x.sample_rate_hz;
  long max_delay = 0;
  for (const auto& tap : h.taps) {
    max_delay = std::max(max_delay, std::lround(tap.delay_s * fs));
  }

  ComplexSignal y;
  y.sample_rate_hz = fs;
  y.samples.assign(x.samples.size() + static_cast<std::size_t>(max_delay), {0.0, 0.0});

  for (const auto& tap : h.taps) {
    const long d = std::lround(tap.delay_s * fs);
    const double tau_frac = tap.delay_s - static_cast<double>(d) / fs;
    const std::complex<double> gain =
        tap.amplitude * std::polar(1.0, -2.0 * std::numbers::pi * carrier_freq_hz * tau_frac);
    for (std::size_t k = 0; k < x.samples.size(); ++k) {
      y.samples[k + static_cast<std::size_t>(d)] += gain * x.samples[k];
    }
  }

  if (noise_var > 0.0) {
    for (auto& s : y.samples) s += rng.cgaussian(noise_var);
  }
  return y;
}

double eve_correlation(const ScenarioConfig& cfg) {
  if (cfg.eve_offset_wavelengths == 0.0) return 1.0;
  const double j0 = std::cyl_bessel_j(0.0, 2.0 * std::numbers::pi * cfg.eve_offset_wavelengths);
  return std::clamp(j0, 0.0, 1.0);
}

double total_channel_power(const ScenarioConfig& cfg) {
  return cfg.diffuse_power * (1.0 + (cfg.los ? rician_k_linear(cfg) : 0.0));
}

double reference_received_power(const ScenarioConfig& cfg, const ChirpSpec& chirp) {
  chirp.validate();
  const double envelope = 1.0 / chirp.duration_s;
  return cfg.diffuse_power * envelope * envelope;
}

double noise_variance_for_snr(const ScenarioConfig& cfg, const ChirpSpec& chirp) {
  return reference_received_power(cfg, chirp) / std::pow(10.0, cfg.snr_db / 10.0);
}

}  // namespace skg
