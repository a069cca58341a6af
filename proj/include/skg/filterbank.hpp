#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "skg/waveform.hpp"

namespace skg {

/// N per-sub-band power measurements (linear power, one value per filter).
using PowerVector = std::vector<double>;

struct GammaParams {
  double shape = 0.0;  // kappa
  double scale = 0.0;  // theta

  double mean() const { return shape * scale; }
  double variance() const { return shape * scale * scale; }
};

struct FilterbankSpec {
  int num_filters = 8;        // N
  double bandwidth_hz = 0.0;  // B (total, each filter covers B/N)
  int prototype_taps = 0;     // 0 -> default 8*N
  enum class Prototype { windowed_sinc } prototype_kind = Prototype::windowed_sinc;

  int effective_taps() const { return prototype_taps > 0 ? prototype_taps : 8 * num_filters; }
  void validate() const;
};

/// Center frequency of filter n (1-based): f_n = -B(N - 2n + 1) / (2N).
/// Adjacent filters are spaced exactly B/N apart and the grid is symmetric
/// around DC. Throws std::domain_error for n outside 1..N.
double center_frequency(int n, const FilterbankSpec& spec);

/// A built analysis filterbank: one windowed-sinc prototype low-pass
/// (cutoff B/(2N), unit DC gain, -3 dB point placed on the sub-band edge)
/// modulated to each center frequency.
class Filterbank {
 public:
  Filterbank();
  ~Filterbank();
  Filterbank(Filterbank&&) noexcept;
  Filterbank& operator=(Filterbank&&) noexcept;

  const FilterbankSpec& spec() const { return spec_; }
  double sample_rate_hz() const { return sample_rate_hz_; }
  const std::vector<double>& prototype() const { return prototype_; }
  const std::vector<std::vector<std::complex<double>>>& filters() const { return filters_; }

  /// Sum |g[k]|^2 of the prototype: the per-filter white-noise power gain.
  double noise_gain() const { return noise_gain_; }

  /// Time-averaged power at each filter output over the fully-overlapped
  /// convolution samples: p_n = (1/K) * sum_k |(g_n * y)_k|^2.
  /// Throws std::invalid_argument if y is shorter than the prototype.
  PowerVector measure(const ComplexSignal& y) const;

 private:
  friend Filterbank build_filterbank(const FilterbankSpec& spec, double sample_rate_hz);

  FilterbankSpec spec_;
  double sample_rate_hz_ = 0.0;
  std::vector<double> prototype_;
  std::vector<std::vector<std::complex<double>>> filters_;
  double noise_gain_ = 0.0;

  // Cached filter spectra per FFT length for the fast convolution path.
  struct SpectraCache;
  std::unique_ptr<SpectraCache> cache_;
};

/// Designs the prototype and modulates it to the N center frequencies.
/// sample_rate_hz defaults to critical sampling (f_s = B) when 0.
/// Throws std::invalid_argument for invalid specs or prototypes < 3 taps.
Filterbank build_filterbank(const FilterbankSpec& spec, double sample_rate_hz = 0.0);

/// Free-function alias for Filterbank::measure.
PowerVector measure_powers(const ComplexSignal& y, const Filterbank& bank);

/// Two-moment Gamma fit of a per-filter power measurement: the sum of
/// per-MPC Gamma components plus the noise contribution,
///   kappa = (sum k_m t_m + 2s^2)^2 / (sum k_m t_m^2 + 8 s^4 / (K - 1)),
///   theta = (sum k_m t_m + 2s^2) / kappa.
/// samples_per_filter K must be >= 2 (throws std::domain_error otherwise).
GammaParams gamma_approx(std::span<const GammaParams> components, double noise_var,
                         double samples_per_filter);

/// Maps a flat-Rayleigh (single-tap) scenario onto gamma_approx inputs for
/// filter n, in NORMALIZED units (powers divided by bank.noise_gain(), the
/// convention in which the noise contribution to the mean is N-independent):
/// one component (1, channel_power * c_n / noise_gain) with c_n the clean
/// probe's measured power in filter n, sigma^2 = noise_var / 2, and
/// K = samples_in_band (ceil(T*B)/N at critical sampling).
GammaParams predict_flat_rayleigh_power(const Filterbank& bank, const PowerVector& clean_probe_powers,
                                        int filter_index, double channel_power, double noise_var,
                                        double samples_in_band);

}  // namespace skg
