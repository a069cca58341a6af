#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>

namespace skg {

/// Deterministic simulation RNG (xoshiro256++ seeded via splitmix64).
///
/// All stochastic stages of the simulator draw from explicitly derived
/// streams so that a run is a pure function of (config, seed) and frames
/// can be processed in any order or thread count without changing results.
/// The standard <random> distributions are avoided on purpose: their output
/// sequences are implementation-defined, which would tie run reproducibility
/// to the standard library version.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1).
  double uniform();

  /// Standard normal N(0, 1), Box-Muller.
  double gaussian();

  /// Circularly-symmetric complex Gaussian with E|z|^2 = var.
  std::complex<double> cgaussian(double var);

  /// Gamma(shape, scale) via Marsaglia-Tsang squeeze.
  double gamma(double shape, double scale);

 private:
  std::uint64_t state_[4];
  double cached_gaussian_ = 0.0;
  bool has_cached_ = false;
};

/// Mixes a base seed with a tag list into an independent stream seed.
/// Used to key per-frame / per-party / per-cell substreams.
std::uint64_t derive_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

}  // namespace skg
