#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "skg/filterbank.hpp"

namespace skg {

/// Bit sequences are kept unpacked (one byte per bit, values 0/1).
using Bits = std::vector<std::uint8_t>;

struct QuantizerSpec {
  enum class Boundary { global_minmax, mean_sigma };

  int levels = 4;  // Q, a power of two
  Boundary boundary_mode = Boundary::mean_sigma;
  double sigma_span = 3.0;  // s, for mean_sigma
  bool per_filter = true;   // calibrate each filter separately

  int bits_per_measurement() const;
  void validate() const;
};

/// Q-1 strictly increasing thresholds over the given sample of powers.
/// global_minmax spaces them evenly between min and max; mean_sigma over
/// [mu - s*sigma, mu + s*sigma]. Throws std::invalid_argument when all
/// values are identical (degenerate input).
std::vector<double> calibrate(std::span<const double> values, const QuantizerSpec& spec);

/// Thresholds for a run of frames; one row per filter (per_filter) or a
/// single shared row.
struct Calibration {
  std::vector<std::vector<double>> thresholds;
  int levels = 0;
  bool per_filter = true;

  const std::vector<double>& row(std::size_t filter_index) const;
};

Calibration calibrate_frames(const std::vector<PowerVector>& frames, const QuantizerSpec& spec);

/// Maps each power to its level (out-of-range values clip to the extreme
/// levels) and Gray-encodes the level into log2(Q) bits, MSB first.
/// Output length = N * log2(Q).
Bits quantize(const PowerVector& powers, const Calibration& calibration, const QuantizerSpec& spec);

/// Reflected binary Gray code of a level, log2(q) bits MSB first.
/// Throws std::domain_error when level >= q.
Bits gray_encode(int level, int q);

/// Inverse of gray_encode.
int gray_decode(std::span<const std::uint8_t> bits);

/// Hamming distance / length. Throws std::invalid_argument on length
/// mismatch or empty input.
double mismatch_rate(const Bits& a, const Bits& b);

}  // namespace skg
