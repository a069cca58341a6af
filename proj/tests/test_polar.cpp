#include "skg/polar.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "doctest.h"
#include "skg/rng.hpp"
#include "test_helpers.hpp"

using namespace skg;

namespace {

Bits random_bits(Rng& rng, std::size_t n) {
  Bits out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng.next_u64() & 1u);
  return out;
}

Bits flip_with_probability(const Bits& in, double p, Rng& rng) {
  Bits out = in;
  for (auto& b : out) {
    if (rng.uniform() < p) b ^= 1u;
  }
  return out;
}

}  // namespace

TEST_CASE("Bhattacharyya recursion: n=2, p=0.1") {
  const auto code = construct_code(2, 1, 2, 0.1);
  // Z0 = 0.6 -> {0.84, 0.36}; index 0 is the least reliable.
  REQUIRE(code.reliability_order.size() == 2);
  CHECK(code.reliability_order[0] == 0);
  CHECK(code.reliability_order[1] == 1);
  CHECK(code.syndrome_positions == std::vector<int>{0});
}

TEST_CASE("rate 1 gives an empty syndrome position set") {
  const auto code = construct_code(8, 1, 1, 0.1);
  CHECK(code.syndrome_len() == 0);
  CHECK(compute_syndrome(Bits(8, 1), code).bits.empty());
}

TEST_CASE("construct_code rejects invalid parameters") {
  CHECK_THROWS_AS(construct_code(3, 1, 2, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(construct_code(8, 3, 2, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(construct_code(8, 1, 2, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(construct_code(8, 1, 2, -0.1), std::invalid_argument);
}

TEST_CASE("polar transform equals multiplication by the Kronecker power") {
  Rng rng(7);
  for (int n : {2, 4, 8, 16}) {
    const auto g = testutil::polar_matrix_oracle(n);
    for (int trial = 0; trial < 20; ++trial) {
      const Bits r = random_bits(rng, static_cast<std::size_t>(n));
      const Bits u = polar_transform(r);
      for (int j = 0; j < n; ++j) {
        std::uint8_t expect = 0;
        for (int i = 0; i < n; ++i) {
          expect ^= static_cast<std::uint8_t>(r[static_cast<std::size_t>(i)] & g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        }
        CHECK(u[static_cast<std::size_t>(j)] == expect);
      }
    }
  }
}

TEST_CASE("polar transform is an involution") {
  Rng rng(13);
  const Bits r = random_bits(rng, 64);
  CHECK(polar_transform(polar_transform(r)) == r);
}

TEST_CASE("hand syndrome: n=4, rate 0.5, r=1000") {
  const auto code = construct_code(4, 1, 2, 0.1);
  // Z-order for p=0.1: indices 0,1,2,3 descending -> syndrome = {u0, u1}.
  REQUIRE(code.syndrome_positions == std::vector<int>{0, 1});
  const Bits r{1, 0, 0, 0};
  // u = r * G4 = (1,0,0,0) (row 0 of G4).
  const auto s = compute_syndrome(r, code);
  CHECK(s.bits == Bits{1, 0});
}

TEST_CASE("syndrome of all-zeros is all-zeros; GF(2) linearity") {
  const auto code = construct_code(64, 1, 2, 0.05);
  CHECK(compute_syndrome(Bits(64, 0), code).bits == Bits(static_cast<std::size_t>(code.syndrome_len()), 0));

  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const Bits a = random_bits(rng, 64);
    const Bits b = random_bits(rng, 64);
    Bits a_xor_b(64);
    for (std::size_t i = 0; i < 64; ++i) a_xor_b[i] = a[i] ^ b[i];
    const auto sa = compute_syndrome(a, code);
    const auto sb = compute_syndrome(b, code);
    const auto sab = compute_syndrome(a_xor_b, code);
    for (std::size_t i = 0; i < sa.bits.size(); ++i) {
      CHECK(sab.bits[i] == (sa.bits[i] ^ sb.bits[i]));
    }
  }
}

TEST_CASE("zero mismatch decodes exactly at every rate") {
  Rng rng(11);
  for (double rate : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
    const auto code = construct_code(256, rate, 0.05);
    for (int trial = 0; trial < 10; ++trial) {
      const Bits r = random_bits(rng, 256);
      const auto s = compute_syndrome(r, code);
      CHECK(sc_decode(r, s, code, 0.02) == r);
    }
  }
}

TEST_CASE("rate 0 reproduces the source regardless of side information") {
  const auto code = construct_code(32, 0.0, 0.1);
  Rng rng(19);
  const Bits r = random_bits(rng, 32);
  const auto s = compute_syndrome(r, code);
  const Bits junk = random_bits(rng, 32);
  CHECK(sc_decode(junk, s, code, 0.3) == r);
}

TEST_CASE("design_crossover 0: any rate decodes mismatch-free input") {
  const auto code = construct_code(64, 0.7, 0.0);
  Rng rng(23);
  const Bits r = random_bits(rng, 64);
  const auto s = compute_syndrome(r, code);
  CHECK(sc_decode(r, s, code, 0.0) == r);
}

TEST_CASE("FER ordering across rates at crossover 0.02 (n=1024)") {
  Rng rng(2025);
  const int frames = 300;
  const double true_p = 0.02;
  std::map<double, double> fer_at_rate;
  for (double rate : {0.1, 0.5, 0.9}) {
    const auto code = construct_code(1024, rate, 0.05);
    std::vector<std::uint8_t> ok(frames, 0);
    for (int f = 0; f < frames; ++f) {
      const Bits r = random_bits(rng, 1024);
      const Bits side = flip_with_probability(r, true_p, rng);
      const auto s = compute_syndrome(r, code);
      ok[static_cast<std::size_t>(f)] = sc_decode(side, s, code, true_p) == r ? 1 : 0;
    }
    fer_at_rate[rate] = frame_error_rate(ok);
  }
  CHECK(fer_at_rate[0.9] >= fer_at_rate[0.5]);
  CHECK(fer_at_rate[0.5] >= fer_at_rate[0.1]);
  CHECK(fer_at_rate[0.1] <= 0.01);
}

TEST_CASE("Eve gains from a lower rate on correlated observations") {
  Rng rng(31337);
  const int frames = 200;
  const double eve_p = 0.1;
  std::map<double, double> fer_at_rate;
  for (double rate : {0.1, 0.9}) {
    const auto code = construct_code(1024, rate, 0.05);
    std::vector<std::uint8_t> ok(frames, 0);
    for (int f = 0; f < frames; ++f) {
      const Bits r = random_bits(rng, 1024);
      const Bits side = flip_with_probability(r, eve_p, rng);
      const auto s = compute_syndrome(r, code);
      ok[static_cast<std::size_t>(f)] = sc_decode(side, s, code, eve_p) == r ? 1 : 0;
    }
    fer_at_rate[rate] = frame_error_rate(ok);
  }
  CHECK(fer_at_rate[0.1] <= fer_at_rate[0.9]);
}

TEST_CASE("frame_error_rate counts failures") {
  CHECK(frame_error_rate({1, 1, 1}) == 0.0);
  CHECK(frame_error_rate({0, 0}) == 1.0);
  CHECK(frame_error_rate({0, 1, 1, 0, 1, 1, 1, 0, 1, 1}) == doctest::Approx(0.3));
  CHECK_THROWS_AS(frame_error_rate({}), std::invalid_argument);
}

TEST_CASE("syndrome wire format round-trips") {
  const auto code = construct_code(1024, 3, 10, 0.05);
  Rng rng(41);
  const Bits r = random_bits(rng, 1024);
  const auto s = compute_syndrome(r, code);
  const auto bytes = serialize_syndrome(s, code);
  REQUIRE(bytes.size() == 8 + (s.bits.size() + 7) / 8);
  CHECK(bytes[0] == 0x00);
  CHECK(bytes[1] == 0x04);  // 1024 little-endian
  CHECK(bytes[4] == 3);
  CHECK(bytes[6] == 10);
  const auto [hdr, parsed] = parse_syndrome(bytes);
  CHECK(hdr.block_len == 1024);
  CHECK(hdr.rate_num == 3);
  CHECK(hdr.rate_den == 10);
  CHECK(parsed.bits == s.bits);

  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS(parse_syndrome(truncated), std::invalid_argument);
}

TEST_CASE("length mismatches are usage errors") {
  const auto code = construct_code(16, 1, 2, 0.1);
  CHECK_THROWS_AS(compute_syndrome(Bits(8, 0), code), std::invalid_argument);
  Syndrome s;
  s.bits = Bits(3, 0);
  CHECK_THROWS_AS(sc_decode(Bits(16, 0), s, code, 0.1), std::invalid_argument);
}
