#include "skg/filterbank.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "detail/fft.hpp"

namespace skg {

struct Filterbank::SpectraCache {
  std::mutex mutex;
  std::map<std::size_t, std::vector<std::vector<std::complex<double>>>> by_length;
};

Filterbank::Filterbank() = default;
Filterbank::~Filterbank() = default;
Filterbank::Filterbank(Filterbank&&) noexcept = default;
Filterbank& Filterbank::operator=(Filterbank&&) noexcept = default;

namespace {

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

std::vector<double> windowed_sinc(int taps, double cutoff_norm) {
  std::vector<double> g(static_cast<std::size_t>(taps));
  const double center = (taps - 1) / 2.0;
  for (int k = 0; k < taps; ++k) {
    const double w = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * k / (taps - 1));
    g[static_cast<std::size_t>(k)] = 2.0 * cutoff_norm * sinc(2.0 * cutoff_norm * (k - center)) * w;
  }
  return g;
}

double magnitude_at(const std::vector<double>& g, double freq_norm) {
  std::complex<double> acc(0.0, 0.0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    acc += g[k] * std::polar(1.0, -2.0 * std::numbers::pi * freq_norm * static_cast<double>(k));
  }
  return std::abs(acc);
}

/// Windowed-sinc low-pass with unit DC gain whose measured -3 dB point sits
/// on the sub-band edge. The design cutoff is found by bisection because a
/// windowed sinc is ~-6 dB at its nominal cutoff.
std::vector<double> design_prototype(int taps, double edge_norm) {
  const double target = 1.0 / std::sqrt(2.0);
  auto response = [&](double cutoff) {
    auto g = windowed_sinc(taps, cutoff);
    const double dc = magnitude_at(g, 0.0);
    return magnitude_at(g, edge_norm) / dc;
  };

  double cutoff = edge_norm;
  if (edge_norm < 0.4) {
    double lo = edge_norm * 0.3;
    double hi = std::min(0.49, edge_norm * 3.0);
    if (response(lo) < target && response(hi) > target) {
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (response(mid) < target ? lo : hi) = mid;
      }
      cutoff = 0.5 * (lo + hi);
    }
  }

  auto g = windowed_sinc(taps, cutoff);
  double dc = 0.0;
  for (double v : g) dc += v;
  for (double& v : g) v /= dc;
  return g;
}

}  // namespace

void FilterbankSpec::validate() const {
  if (num_filters < 1) throw std::invalid_argument("FilterbankSpec: num_filters must be >= 1");
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("FilterbankSpec: bandwidth_hz must be > 0");
  if (effective_taps() < 3) throw std::invalid_argument("FilterbankSpec: prototype needs >= 3 taps");
}

double center_frequency(int n, const FilterbankSpec& spec) {
  spec.validate();
  if (n < 1 || n > spec.num_filters) {
    throw std::domain_error("center_frequency: filter index outside 1..N");
  }
  const double big_n = spec.num_filters;
  return -spec.bandwidth_hz * (big_n - 2.0 * n + 1.0) / (2.0 * big_n);
}

Filterbank build_filterbank(const FilterbankSpec& spec, double sample_rate_hz) {
  spec.validate();
  const double fs = sample_rate_hz > 0.0 ? sample_rate_hz : spec.bandwidth_hz;
  if (fs < spec.bandwidth_hz) {
    throw std::invalid_argument("build_filterbank: sample rate below total bandwidth");
  }

  Filterbank bank;
  bank.spec_ = spec;
  bank.sample_rate_hz_ = fs;
  bank.cache_ = std::make_unique<Filterbank::SpectraCache>();

  const int taps = spec.effective_taps();
  const double edge_norm = spec.bandwidth_hz / (2.0 * spec.num_filters) / fs;
  bank.prototype_ = design_prototype(taps, edge_norm);

  bank.noise_gain_ = 0.0;
  for (double v : bank.prototype_) bank.noise_gain_ += v * v;

  bank.filters_.resize(static_cast<std::size_t>(spec.num_filters));
  for (int n = 1; n <= spec.num_filters; ++n) {
    const double fn_norm = center_frequency(n, spec) / fs;
    auto& gn = bank.filters_[static_cast<std::size_t>(n - 1)];
    gn.resize(bank.prototype_.size());
    for (std::size_t k = 0; k < gn.size(); ++k) {
      gn[k] = bank.prototype_[k] *
              std::polar(1.0, 2.0 * std::numbers::pi * fn_norm * static_cast<double>(k));
    }
  }
  return bank;
}

PowerVector Filterbank::measure(const ComplexSignal& y) const {
  const std::size_t len = y.samples.size();
  const std::size_t taps = prototype_.size();
  if (len < taps) {
    throw std::invalid_argument("measure_powers: signal shorter than the prototype filter");
  }
  const std::size_t valid = len - taps + 1;
  PowerVector powers(filters_.size(), 0.0);

  // Direct convolution for short prototypes, shared-FFT fast convolution
  // otherwise; both evaluate the same fully-overlapped samples.
  const std::size_t fft_len = detail::next_pow2(len + taps - 1);
  const bool use_fft =
      taps >= 48 && valid * taps > 4 * fft_len * static_cast<std::size_t>(std::log2(fft_len) + 1);

  if (!use_fft) {
    for (std::size_t f = 0; f < filters_.size(); ++f) {
      const auto& g = filters_[f];
      double acc = 0.0;
      for (std::size_t k = 0; k < valid; ++k) {
        std::complex<double> s(0.0, 0.0);
        for (std::size_t m = 0; m < taps; ++m) {
          s += g[m] * y.samples[k + taps - 1 - m];
        }
        acc += std::norm(s);
      }
      powers[f] = acc / static_cast<double>(valid);
    }
    return powers;
  }

  const std::vector<std::vector<std::complex<double>>>* spectra = nullptr;
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->by_length.find(fft_len);
    if (it == cache_->by_length.end()) {
      std::vector<std::vector<std::complex<double>>> built;
      built.reserve(filters_.size());
      for (const auto& g : filters_) {
        std::vector<std::complex<double>> gg(g.begin(), g.end());
        gg.resize(fft_len);
        detail::fft_pow2(gg, false);
        built.push_back(std::move(gg));
      }
      it = cache_->by_length.emplace(fft_len, std::move(built)).first;
    }
    spectra = &it->second;
  }

  std::vector<std::complex<double>> y_spec(y.samples.begin(), y.samples.end());
  y_spec.resize(fft_len);
  detail::fft_pow2(y_spec, false);

  std::vector<std::complex<double>> work(fft_len);
  for (std::size_t f = 0; f < filters_.size(); ++f) {
    const auto& gs = (*spectra)[f];
    for (std::size_t i = 0; i < fft_len; ++i) work[i] = y_spec[i] * gs[i];
    detail::fft_pow2(work, true);
    double acc = 0.0;
    for (std::size_t k = taps - 1; k < len; ++k) acc += std::norm(work[k]);
    powers[f] = acc / static_cast<double>(valid);
  }
  return powers;
}

PowerVector measure_powers(const ComplexSignal& y, const Filterbank& bank) {
  return bank.measure(y);
}

GammaParams gamma_approx(std::span<const GammaParams> components, double noise_var,
                         double samples_per_filter) {
  for (const auto& c : components) {
    if (!(c.shape > 0.0) || !(c.scale > 0.0)) {
      throw std::invalid_argument("gamma_approx: component shape/scale must be > 0");
    }
  }
  if (noise_var < 0.0) throw std::invalid_argument("gamma_approx: noise_var must be >= 0");
  if (samples_per_filter < 2.0) {
    throw std::domain_error("gamma_approx: samples_per_filter must be >= 2");
  }

  double mean_sum = 0.0;
  double var_sum = 0.0;
  for (const auto& c : components) {
    mean_sum += c.shape * c.scale;
    var_sum += c.shape * c.scale * c.scale;
  }
  const double mean = mean_sum + 2.0 * noise_var;
  const double variance = var_sum + 8.0 * noise_var * noise_var / (samples_per_filter - 1.0);
  if (!(mean > 0.0) || !(variance > 0.0)) {
    throw std::invalid_argument("gamma_approx: degenerate moment inputs");
  }
  GammaParams out;
  out.shape = mean * mean / variance;
  out.scale = mean / out.shape;
  return out;
}

GammaParams predict_flat_rayleigh_power(const Filterbank& bank, const PowerVector& clean_probe_powers,
                                        int filter_index, double channel_power, double noise_var,
                                        double samples_in_band) {
  if (filter_index < 0 || filter_index >= static_cast<int>(clean_probe_powers.size())) {
    throw std::domain_error("predict_flat_rayleigh_power: filter index out of range");
  }
  const double c_n = clean_probe_powers[static_cast<std::size_t>(filter_index)];
  const GammaParams component{1.0, channel_power * c_n / bank.noise_gain()};
  return gamma_approx(std::span<const GammaParams>(&component, 1), noise_var / 2.0,
                      samples_in_band);
}

}  // namespace skg
