#pragma once

#include <cstdint>
#include <vector>

#include "skg/quantizer.hpp"

namespace skg {

/// A polar code instance for Slepian-Wolf reconciliation. The syndrome
/// occupies the (1 - rate) * n least reliable synthetic-channel positions,
/// ranked by the BSC Bhattacharyya recursion at design_crossover.
struct PolarCodeSpec {
  int block_len = 0;  // n = 2^m
  std::uint16_t rate_num = 1;
  std::uint16_t rate_den = 1;
  double design_crossover = 0.0;
  std::vector<int> reliability_order;   // least reliable first
  std::vector<std::uint8_t> is_syndrome_pos;  // per-index flag
  std::vector<int> syndrome_positions;  // ascending

  double rate() const { return static_cast<double>(rate_num) / rate_den; }
  int syndrome_len() const { return static_cast<int>(syndrome_positions.size()); }
};

struct Syndrome {
  Bits bits;
};

/// Builds the reliability order with the Bhattacharyya recursion
/// Z- = 2Z - Z^2, Z+ = Z^2 from Z0 = 2*sqrt(p(1-p)), then marks the
/// round((1-rate)*n) least reliable indices as syndrome positions.
PolarCodeSpec construct_code(int block_len, std::uint16_t rate_num, std::uint16_t rate_den,
                             double design_crossover);

/// Convenience overload: rationalizes a decimal rate over denominator 10000.
PolarCodeSpec construct_code(int block_len, double rate, double design_crossover);

/// The polar transform u = r * G_n (n-th Kronecker power of [[1,0],[1,1]],
/// natural order). Involutive over GF(2).
Bits polar_transform(const Bits& r);

/// Syndrome of a full block: the transform of r at the syndrome positions.
Syndrome compute_syndrome(const Bits& r, const PolarCodeSpec& code);

/// Successive-cancellation reconstruction of the source block from side
/// information r_side over a virtual BSC(channel_p), with the syndrome
/// positions of the transform pinned to s. Always returns a candidate;
/// correctness is measured externally as FER.
Bits sc_decode(const Bits& r_side, const Syndrome& s, const PolarCodeSpec& code, double channel_p);

/// Fraction of failed frames. Throws std::invalid_argument on empty input.
double frame_error_rate(const std::vector<std::uint8_t>& frame_ok);

/// Wire format: 8-byte header (u32 LE block_len, u16 LE rate numerator,
/// u16 LE rate denominator) followed by the syndrome bits packed LSB-first.
std::vector<std::uint8_t> serialize_syndrome(const Syndrome& s, const PolarCodeSpec& code);

struct SyndromeHeader {
  std::uint32_t block_len = 0;
  std::uint16_t rate_num = 0;
  std::uint16_t rate_den = 0;
};

/// Parses the wire format back. Throws std::invalid_argument on truncated
/// or inconsistent payloads.
std::pair<SyndromeHeader, Syndrome> parse_syndrome(const std::vector<std::uint8_t>& bytes);

}  // namespace skg
