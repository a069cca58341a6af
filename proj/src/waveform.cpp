#include "skg/waveform.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace skg {

void ChirpSpec::validate() const {
  if (!(duration_s > 0.0)) throw std::invalid_argument("ChirpSpec: duration_s must be > 0");
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("ChirpSpec: bandwidth_hz must be > 0");
  if (!(sample_rate_hz > 0.0)) throw std::invalid_argument("ChirpSpec: sample_rate_hz must be > 0");
  if (sample_rate_hz < bandwidth_hz) {
    throw std::invalid_argument("ChirpSpec: sample_rate_hz must be >= bandwidth_hz");
  }
  if (!std::isfinite(chirp_rate())) throw std::invalid_argument("ChirpSpec: chirp rate not finite");
}

std::size_t ChirpSpec::sample_count() const {
  return static_cast<std::size_t>(std::ceil(duration_s * sample_rate_hz));
}

double ComplexSignal::energy() const {
  double e = 0.0;
  for (const auto& s : samples) e += std::norm(s);
  return e;
}

ComplexSignal generate_chirp(const ChirpSpec& spec) {
  spec.validate();
  const std::size_t n = spec.sample_count();
  const double amp = 1.0 / spec.duration_s;
  const double c = spec.chirp_rate();
  const double half_t = spec.duration_s / 2.0;

  ComplexSignal out;
  out.sample_rate_hz = spec.sample_rate_hz;
  out.samples.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / spec.sample_rate_hz - half_t;
    const double phase = std::numbers::pi * c * t * t;
    out.samples[k] = std::polar(amp, phase);
  }
  return out;
}

double instantaneous_frequency(const ChirpSpec& spec, double t) {
  spec.validate();
  if (t < 0.0 || t > spec.duration_s) {
    throw std::domain_error("instantaneous_frequency: t outside [0, T]");
  }
  const double f0 = spec.center_freq_hz - spec.bandwidth_hz / 2.0;
  return spec.chirp_rate() * t + f0;
}

}  // namespace skg
