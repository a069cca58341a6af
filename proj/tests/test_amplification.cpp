#include "skg/amplification.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "skg/rng.hpp"

using namespace skg;

namespace {

Bits random_bits(Rng& rng, std::size_t n) {
  Bits out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng.next_u64() & 1u);
  return out;
}

}  // namespace

TEST_CASE("key_length floors the estimate and clamps to the input length") {
  EntropyEstimate h;
  h.bits = 0.9;
  CHECK(key_length(h, 128) == 0);
  h.bits = 2.0;
  CHECK(key_length(h, 128) == 2);
  h.bits = 300.7;
  CHECK(key_length(h, 128) == 128);
}

TEST_CASE("amplify basic contracts") {
  Rng rng(1);
  const Bits r = random_bits(rng, 64);
  const Bits seed = random_bits(rng, 64 + 32 - 1);

  CHECK(amplify(r, 0, seed).bits.empty());
  CHECK_THROWS_AS(amplify(r, 65, seed), std::invalid_argument);
  CHECK_THROWS_AS(amplify(r, 33, seed), std::invalid_argument);  // seed too short

  const auto k1 = amplify(r, 32, seed);
  const auto k2 = amplify(r, 32, seed);
  CHECK(k1.bits == k2.bits);
  REQUIRE(k1.bits.size() == 32);
}

TEST_CASE("toeplitz structure: output is linear in the input") {
  Rng rng(7);
  const std::size_t in_len = 48;
  const std::size_t out_len = 16;
  const Bits seed = random_bits(rng, in_len + out_len - 1);
  const Bits a = random_bits(rng, in_len);
  const Bits b = random_bits(rng, in_len);
  Bits a_xor_b(in_len);
  for (std::size_t i = 0; i < in_len; ++i) a_xor_b[i] = a[i] ^ b[i];

  const auto ka = amplify(a, out_len, seed);
  const auto kb = amplify(b, out_len, seed);
  const auto kab = amplify(a_xor_b, out_len, seed);
  for (std::size_t i = 0; i < out_len; ++i) {
    CHECK(kab.bits[i] == (ka.bits[i] ^ kb.bits[i]));
  }
}

TEST_CASE("output-bit bias stays within 0.5 +/- 0.02 over 1e4 draws") {
  Rng rng(4242);
  const std::size_t in_len = 128;
  const std::size_t out_len = 64;
  const int draws = 10000;
  std::vector<int> ones(out_len, 0);
  for (int d = 0; d < draws; ++d) {
    const Bits r = random_bits(rng, in_len);
    const Bits seed = random_bits(rng, in_len + out_len - 1);
    const auto key = amplify(r, out_len, seed);
    for (std::size_t i = 0; i < out_len; ++i) ones[i] += key.bits[i];
  }
  for (std::size_t i = 0; i < out_len; ++i) {
    const double freq = static_cast<double>(ones[i]) / draws;
    CHECK(freq > 0.48);
    CHECK(freq < 0.52);
  }
}

TEST_CASE("single input-bit flip toggles each output bit about half the time") {
  Rng rng(99);
  const std::size_t in_len = 64;
  const std::size_t out_len = 32;
  const int draws = 4000;
  std::vector<int> flips(out_len, 0);
  for (int d = 0; d < draws; ++d) {
    const Bits seed = random_bits(rng, in_len + out_len - 1);
    const Bits r = random_bits(rng, in_len);
    Bits r2 = r;
    const std::size_t flip_pos = rng.next_u64() % in_len;
    r2[flip_pos] ^= 1u;
    const auto k1 = amplify(r, out_len, seed);
    const auto k2 = amplify(r2, out_len, seed);
    for (std::size_t i = 0; i < out_len; ++i) flips[i] += k1.bits[i] != k2.bits[i];
  }
  for (std::size_t i = 0; i < out_len; ++i) {
    const double freq = static_cast<double>(flips[i]) / draws;
    CHECK(freq > 0.45);
    CHECK(freq < 0.55);
  }
}

TEST_CASE("hex rendering is lowercase MSB-first") {
  SecretKey key;
  key.bits = {1, 0, 1, 0, 1, 1, 1, 1};  // 0xaf
  CHECK(key.hex() == "af");
  key.bits = {1, 1, 0};  // partial leading nibble
  CHECK(key.hex() == "6");
  key.bits.clear();
  CHECK(key.hex().empty());
}
