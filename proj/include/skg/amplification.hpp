#pragma once

#include <string>

#include "skg/entropy.hpp"
#include "skg/quantizer.hpp"

namespace skg {

struct SecretKey {
  Bits bits;

  /// Lowercase hex, MSB-first, for run reports.
  std::string hex() const;
};

/// Entropy-justified key length: floor of the estimate, never exceeding the
/// reconciled input length.
std::size_t key_length(const EntropyEstimate& h, std::size_t input_len);

/// Seeded 2-universal compression: multiplies r by a binary Toeplitz matrix
/// whose diagonals are the seed bits (requires |seed| >= |r| + target_len - 1)
/// and keeps the first target_len output bits. Deterministic in (r, seed).
/// Throws std::invalid_argument when target_len > |r| or the seed is short.
SecretKey amplify(const Bits& r, std::size_t target_len, const Bits& seed);

}  // namespace skg
