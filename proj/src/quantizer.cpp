#include "skg/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace skg {

int QuantizerSpec::bits_per_measurement() const {
  int bits = 0;
  int q = levels;
  while (q > 1) {
    q >>= 1;
    ++bits;
  }
  return bits;
}

void QuantizerSpec::validate() const {
  if (levels < 2 || (levels & (levels - 1)) != 0) {
    throw std::invalid_argument("QuantizerSpec: levels must be a power of two >= 2");
  }
  if (boundary_mode == Boundary::mean_sigma && !(sigma_span > 0.0)) {
    throw std::invalid_argument("QuantizerSpec: sigma_span must be > 0");
  }
}

std::vector<double> calibrate(std::span<const double> values, const QuantizerSpec& spec) {
  spec.validate();
  if (values.size() < 2) throw std::invalid_argument("calibrate: need at least 2 power values");

  double lo = 0.0;
  double hi = 0.0;
  if (spec.boundary_mode == QuantizerSpec::Boundary::global_minmax) {
    lo = *std::min_element(values.begin(), values.end());
    hi = *std::max_element(values.begin(), values.end());
  } else {
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());
    const double sigma = std::sqrt(var);
    lo = mean - spec.sigma_span * sigma;
    hi = mean + spec.sigma_span * sigma;
  }
  if (!(hi > lo)) throw std::invalid_argument("calibrate: degenerate input (all powers identical)");

  std::vector<double> thresholds(static_cast<std::size_t>(spec.levels - 1));
  for (int i = 1; i < spec.levels; ++i) {
    thresholds[static_cast<std::size_t>(i - 1)] = lo + (hi - lo) * i / spec.levels;
  }
  return thresholds;
}

const std::vector<double>& Calibration::row(std::size_t filter_index) const {
  if (thresholds.empty()) throw std::invalid_argument("Calibration: empty");
  return per_filter ? thresholds.at(filter_index) : thresholds.front();
}

Calibration calibrate_frames(const std::vector<PowerVector>& frames, const QuantizerSpec& spec) {
  spec.validate();
  if (frames.empty()) throw std::invalid_argument("calibrate_frames: no frames");
  const std::size_t n = frames.front().size();
  for (const auto& f : frames) {
    if (f.size() != n) throw std::invalid_argument("calibrate_frames: inconsistent frame widths");
  }

  Calibration cal;
  cal.levels = spec.levels;
  cal.per_filter = spec.per_filter;
  if (spec.per_filter) {
    cal.thresholds.reserve(n);
    std::vector<double> column(frames.size());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t f = 0; f < frames.size(); ++f) column[f] = frames[f][i];
      cal.thresholds.push_back(calibrate(column, spec));
    }
  } else {
    std::vector<double> all;
    all.reserve(frames.size() * n);
    for (const auto& f : frames) all.insert(all.end(), f.begin(), f.end());
    cal.thresholds.push_back(calibrate(all, spec));
  }
  return cal;
}

Bits quantize(const PowerVector& powers, const Calibration& calibration, const QuantizerSpec& spec) {
  spec.validate();
  if (calibration.levels != spec.levels) {
    throw std::invalid_argument("quantize: calibration built for a different Q");
  }
  const int bits = spec.bits_per_measurement();
  Bits out;
  out.reserve(powers.size() * static_cast<std::size_t>(bits));
  for (std::size_t i = 0; i < powers.size(); ++i) {
    const auto& thr = calibration.row(i);
    const auto it = std::upper_bound(thr.begin(), thr.end(), powers[i]);
    const int level = static_cast<int>(it - thr.begin());
    const Bits code = gray_encode(level, spec.levels);
    out.insert(out.end(), code.begin(), code.end());
  }
  return out;
}

Bits gray_encode(int level, int q) {
  if (q < 2 || (q & (q - 1)) != 0) throw std::invalid_argument("gray_encode: q must be a power of two");
  if (level < 0 || level >= q) throw std::domain_error("gray_encode: level outside 0..Q-1");
  const unsigned gray = static_cast<unsigned>(level) ^ (static_cast<unsigned>(level) >> 1);
  int bits = 0;
  for (int v = q; v > 1; v >>= 1) ++bits;
  Bits out(static_cast<std::size_t>(bits));
  for (int b = 0; b < bits; ++b) {
    out[static_cast<std::size_t>(b)] = static_cast<std::uint8_t>((gray >> (bits - 1 - b)) & 1u);
  }
  return out;
}

int gray_decode(std::span<const std::uint8_t> bits) {
  if (bits.empty()) throw std::invalid_argument("gray_decode: empty input");
  unsigned gray = 0;
  for (auto b : bits) gray = (gray << 1) | (b & 1u);
  unsigned level = gray;
  for (unsigned shift = 1; shift < bits.size(); shift <<= 1) level ^= level >> shift;
  return static_cast<int>(level);
}

double mismatch_rate(const Bits& a, const Bits& b) {
  if (a.size() != b.size()) throw std::invalid_argument("mismatch_rate: length mismatch");
  if (a.empty()) throw std::invalid_argument("mismatch_rate: empty sequences");
  std::size_t diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) diff += (a[i] ^ b[i]) & 1u;
  return static_cast<double>(diff) / static_cast<double>(a.size());
}

}  // namespace skg
