#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace skg {

/// Parameters of the linear up-chirp probing waveform.
///
/// The carrier frequency is metadata only: all signal processing is done in
/// baseband, and f_c is consulted solely for wavelength-derived quantities
/// (eavesdropper placement).
struct ChirpSpec {
  double duration_s = 0.0;     // T
  double bandwidth_hz = 0.0;   // B
  double center_freq_hz = 0.0; // f_c
  double sample_rate_hz = 0.0; // f_s

  /// Sweep slope c = B / T.
  double chirp_rate() const { return bandwidth_hz / duration_s; }

  /// Number of samples produced by generate_chirp: ceil(T * f_s).
  std::size_t sample_count() const;

  /// Throws std::invalid_argument on non-positive T, B or f_s, or f_s < B.
  void validate() const;
};

struct ComplexSignal {
  std::vector<std::complex<double>> samples;
  double sample_rate_hz = 0.0;

  double energy() const;
};

/// Sampled baseband up-chirp x(t) = (1/T) exp(j*pi*c*t^2) with the time
/// origin shifted to T/2 so the sweep covers [-B/2, +B/2]. Every sample has
/// magnitude exactly 1/T.
ComplexSignal generate_chirp(const ChirpSpec& spec);

/// Instantaneous frequency f(t) = c*t + f_0 with f_0 = f_c - B/2, for
/// t in [0, T]. Throws std::domain_error outside that interval.
double instantaneous_frequency(const ChirpSpec& spec, double t);

}  // namespace skg
