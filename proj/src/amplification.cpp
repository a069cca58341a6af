#include "skg/amplification.hpp"

#include <cmath>
#include <stdexcept>

namespace skg {

std::string SecretKey::hex() const {
  const std::size_t digits = (bits.size() + 3) / 4;
  std::string out;
  out.reserve(digits);
  std::size_t i = 0;
  // Leading partial nibble first so the tail aligns on 4-bit boundaries.
  const std::size_t lead = bits.size() % 4;
  if (lead != 0) {
    unsigned v = 0;
    for (; i < lead; ++i) v = (v << 1) | bits[i];
    out.push_back("0123456789abcdef"[v]);
  }
  while (i < bits.size()) {
    unsigned v = 0;
    for (std::size_t k = 0; k < 4; ++k, ++i) v = (v << 1) | bits[i];
    out.push_back("0123456789abcdef"[v]);
  }
  return out;
}

std::size_t key_length(const EntropyEstimate& h, std::size_t input_len) {
  if (h.bits < 0.0) throw std::invalid_argument("key_length: negative entropy estimate");
  const double floored = std::floor(h.bits);
  return std::min(static_cast<std::size_t>(floored), input_len);
}

SecretKey amplify(const Bits& r, std::size_t target_len, const Bits& seed) {
  if (target_len > r.size()) {
    throw std::invalid_argument("amplify: target length exceeds input length");
  }
  SecretKey key;
  if (target_len == 0) return key;
  if (seed.size() < r.size() + target_len - 1) {
    throw std::invalid_argument("amplify: seed must provide |r| + target_len - 1 bits");
  }

  // T[i][j] = seed[i - j + |r| - 1]; row i of the product is the inner
  // product of that diagonal slice with r over GF(2).
  key.bits.resize(target_len);
  const std::size_t offset = r.size() - 1;
  for (std::size_t i = 0; i < target_len; ++i) {
    unsigned acc = 0;
    for (std::size_t j = 0; j < r.size(); ++j) {
      acc ^= static_cast<unsigned>(seed[i + offset - j] & r[j]);
    }
    key.bits[i] = static_cast<std::uint8_t>(acc & 1u);
  }
  return key;
}

}  // namespace skg
