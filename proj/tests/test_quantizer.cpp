#include "skg/quantizer.hpp"

#include <algorithm>
#include <stdexcept>

#include "doctest.h"
#include "skg/rng.hpp"
#include "test_helpers.hpp"

using namespace skg;

namespace {

QuantizerSpec minmax_spec(int q) {
  QuantizerSpec spec;
  spec.levels = q;
  spec.boundary_mode = QuantizerSpec::Boundary::global_minmax;
  return spec;
}

}  // namespace

TEST_CASE("global-minmax thresholds over [0,1], Q=4 -> {0.25, 0.5, 0.75}") {
  const std::vector<double> powers{0.0, 0.3, 0.6, 1.0};
  const auto thr = calibrate(powers, minmax_spec(4));
  REQUIRE(thr.size() == 3);
  CHECK(thr[0] == doctest::Approx(0.25));
  CHECK(thr[1] == doctest::Approx(0.5));
  CHECK(thr[2] == doctest::Approx(0.75));
}

TEST_CASE("Q=2 single midpoint threshold") {
  const std::vector<double> powers{2.0, 4.0};
  const auto thr = calibrate(powers, minmax_spec(2));
  REQUIRE(thr.size() == 1);
  CHECK(thr[0] == doctest::Approx(3.0));
}

TEST_CASE("degenerate all-identical powers rejected") {
  const std::vector<double> powers{1.0, 1.0, 1.0};
  CHECK_THROWS_AS(calibrate(powers, minmax_spec(4)), std::invalid_argument);
}

TEST_CASE("mean-sigma thresholds are strictly increasing and centered") {
  QuantizerSpec spec;
  spec.levels = 16;
  spec.boundary_mode = QuantizerSpec::Boundary::mean_sigma;
  spec.sigma_span = 3.0;
  Rng rng(17);
  std::vector<double> powers(5000);
  for (auto& p : powers) p = rng.gamma(2.0, 1.5);
  const auto thr = calibrate(powers, spec);
  REQUIRE(thr.size() == 15);
  for (std::size_t i = 1; i < thr.size(); ++i) CHECK(thr[i] > thr[i - 1]);
}

TEST_CASE("mean-sigma(3) clips under 2% of Gamma-distributed powers") {
  QuantizerSpec spec;
  spec.levels = 16;
  spec.boundary_mode = QuantizerSpec::Boundary::mean_sigma;
  spec.sigma_span = 3.0;
  Rng rng(99);
  // Shape from a typical fitted per-filter Gamma (fairly peaked).
  std::vector<double> powers(100000);
  for (auto& p : powers) p = rng.gamma(4.0, 0.5);
  const auto thr = calibrate(powers, spec);
  std::size_t clipped = 0;
  for (double p : powers) {
    if (p <= thr.front() || p > thr.back()) ++clipped;
  }
  CHECK(static_cast<double>(clipped) / powers.size() < 0.02);
}

TEST_CASE("gray code table for Q=4 and adjacency for all Q") {
  CHECK(gray_encode(0, 4) == Bits{0, 0});
  CHECK(gray_encode(1, 4) == Bits{0, 1});
  CHECK(gray_encode(2, 4) == Bits{1, 1});
  CHECK(gray_encode(3, 4) == Bits{1, 0});
  CHECK_THROWS_AS(gray_encode(4, 4), std::domain_error);

  for (int q : {2, 4, 8, 16, 32}) {
    // Against the textbook reflected construction.
    int bits = 0;
    for (int v = q; v > 1; v >>= 1) ++bits;
    const auto oracle = testutil::reflected_gray_oracle(bits);
    for (int level = 0; level < q; ++level) {
      const auto code = gray_encode(level, q);
      CHECK(code == Bits(oracle[static_cast<std::size_t>(level)]));
      CHECK(gray_decode(code) == level);
      if (level > 0) {
        const auto prev = gray_encode(level - 1, q);
        int diff = 0;
        for (std::size_t i = 0; i < code.size(); ++i) diff += code[i] != prev[i];
        CHECK(diff == 1);
      }
    }
  }
}

TEST_CASE("quantize: N=16, Q=4 yields 32 bits; clipping to extremes") {
  QuantizerSpec spec = minmax_spec(4);
  spec.per_filter = false;
  std::vector<PowerVector> frames(1);
  frames[0].assign(16, 0.0);
  for (int i = 0; i < 16; ++i) frames[0][static_cast<std::size_t>(i)] = i / 15.0;
  frames.push_back(frames[0]);
  const auto cal = calibrate_frames(frames, spec);
  const auto bits = quantize(frames[0], cal, spec);
  CHECK(bits.size() == 32);

  // Below the lowest threshold -> level 0 -> all-zero Gray code.
  PowerVector low(16, -5.0);
  const auto low_bits = quantize(low, cal, spec);
  for (auto b : low_bits) CHECK(b == 0);

  // Above the highest threshold -> top level.
  PowerVector high(16, 99.0);
  const auto high_bits = quantize(high, cal, spec);
  for (std::size_t i = 0; i < 16; ++i) {
    CHECK(gray_decode(std::span<const std::uint8_t>(high_bits).subspan(2 * i, 2)) == 3);
  }
}

TEST_CASE("quantization level is monotone in power") {
  QuantizerSpec spec = minmax_spec(8);
  spec.per_filter = false;
  Rng rng(5);
  std::vector<PowerVector> frames;
  for (int f = 0; f < 32; ++f) {
    PowerVector p(4);
    for (auto& v : p) v = rng.uniform();
    frames.push_back(p);
  }
  const auto cal = calibrate_frames(frames, spec);
  int prev_level = -1;
  for (int i = 0; i <= 100; ++i) {
    PowerVector p(4, i / 100.0);
    const auto bits = quantize(p, cal, spec);
    const int level = gray_decode(std::span<const std::uint8_t>(bits).subspan(0, 3));
    CHECK(level >= prev_level);
    prev_level = level;
  }
}

TEST_CASE("adjacent-level powers differ in exactly one bit") {
  QuantizerSpec spec = minmax_spec(4);
  spec.per_filter = false;
  std::vector<PowerVector> frames{PowerVector{0.0}, PowerVector{1.0}};
  const auto cal = calibrate_frames(frames, spec);
  // 0.2 -> level 0, 0.3 -> level 1 (threshold at 0.25).
  const auto a = quantize(PowerVector{0.2}, cal, spec);
  const auto b = quantize(PowerVector{0.3}, cal, spec);
  int diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) diff += a[i] != b[i];
  CHECK(diff == 1);
}

TEST_CASE("mismatch_rate basics and concentration") {
  Bits a{0, 1, 1, 0};
  CHECK(mismatch_rate(a, a) == 0.0);
  Bits b{1, 0, 0, 1};
  CHECK(mismatch_rate(a, b) == 1.0);
  Bits c{0, 1};
  CHECK_THROWS_AS(mismatch_rate(a, c), std::invalid_argument);

  Rng rng(123);
  Bits x(1000000);
  Bits y(1000000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = static_cast<std::uint8_t>(rng.next_u64() & 1u);
    y[i] = static_cast<std::uint8_t>(rng.next_u64() & 1u);
  }
  CHECK(std::abs(mismatch_rate(x, y) - 0.5) < 0.002);
}

TEST_CASE("per-filter calibration keeps one row per filter") {
  QuantizerSpec spec = minmax_spec(4);
  spec.per_filter = true;
  Rng rng(8);
  std::vector<PowerVector> frames;
  for (int f = 0; f < 10; ++f) {
    PowerVector p(6);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = rng.uniform() + static_cast<double>(i) * 10.0;
    frames.push_back(p);
  }
  const auto cal = calibrate_frames(frames, spec);
  REQUIRE(cal.thresholds.size() == 6);
  // Each filter's thresholds live inside its own power decade.
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(cal.thresholds[i].front() >= static_cast<double>(i) * 10.0);
    CHECK(cal.thresholds[i].back() <= static_cast<double>(i) * 10.0 + 1.0);
  }
}
