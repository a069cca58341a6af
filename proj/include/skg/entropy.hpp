#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "skg/quantizer.hpp"

namespace skg {

/// A fixed-width bit string (up to 64 bits), the opaque alphabet element of
/// the estimators. Secrets are r_A frames or sub-blocks; observations are
/// concatenations of r_E material and syndrome bits.
struct Symbol {
  std::uint64_t value = 0;
  std::uint32_t bit_len = 0;

  bool operator==(const Symbol&) const = default;
};

Symbol pack_symbol(std::span<const std::uint8_t> bits);
Bits unpack_symbol(const Symbol& s);

struct SampleRecord {
  Symbol secret;
  Symbol observation;
};

struct SampleSet {
  std::vector<SampleRecord> records;

  std::uint32_t secret_bits() const;
  std::uint32_t observation_bits() const;
  void validate() const;
};

enum class EstimatorKind { exact, frequentist, nearest_neighbor };

enum class CondMode {
  worst_case,    // -log2 max_{a,o} p(a|o)  (paper-literal form)
  average_case,  // -log2 sum_o p(o) max_a p(a|o)  (guessing probability)
};

struct EntropyEstimate {
  double bits = 0.0;
  EstimatorKind estimator = EstimatorKind::exact;
  CondMode mode = CondMode::worst_case;
  bool conditional = false;
  std::uint32_t secret_bit_len = 0;
  std::size_t sample_count = 0;
  /// Observation values realized fewer than 5 times (degenerate-support
  /// cells contributing to a conditional estimate).
  std::size_t low_support_warnings = 0;
};

/// Exact joint distribution over (secret, observation) cells, row-major in
/// the secret index.
struct JointTable {
  std::uint32_t secret_bits = 0;
  std::uint32_t observation_bits = 0;
  std::vector<double> p;  // size 2^(secret_bits + observation_bits)

  double& at(std::uint64_t secret, std::uint64_t obs);
  double at(std::uint64_t secret, std::uint64_t obs) const;
  void validate() const;
};

inline constexpr std::uint64_t kDefaultAlphabetBudget = 1ull << 24;

/// Min-entropy H = -log2 max p of an explicit distribution.
EntropyEstimate min_entropy(std::span<const double> distribution, std::uint32_t secret_bit_len);

/// Frequentist plug-in min-entropy of the secrets in a sample set.
EntropyEstimate min_entropy(const SampleSet& samples,
                            std::uint64_t alphabet_budget = kDefaultAlphabetBudget);

/// Conditional min-entropy on an exact joint table.
EntropyEstimate cond_min_entropy(const JointTable& joint, CondMode mode);

/// Frequentist plug-in conditional min-entropy from samples. Observation
/// values with fewer than 5 samples still contribute but are counted in
/// low_support_warnings.
EntropyEstimate cond_min_entropy(const SampleSet& samples, CondMode mode,
                                 std::uint64_t alphabet_budget = kDefaultAlphabetBudget);

/// Leakage = H(secret) - H(secret | observation), Eq.-style difference.
/// Requires matching estimator families and secret widths.
double leakage(const EntropyEstimate& h_uncond, const EntropyEstimate& h_cond);

/// Leave-one-out nearest-neighbor (Hamming metric on observations) estimate
/// of the Bayes guessing probability, in min-entropy bits. Ties break to the
/// smallest record index. Falls back to the frequentist estimate (flagged)
/// when all observations are identical.
EntropyEstimate nn_estimate(const SampleSet& samples,
                            std::uint64_t alphabet_budget = kDefaultAlphabetBudget);

/// CSV round-trip: header `secret_hex,observation_hex` plus a
/// `# bits=<s>,<o>` comment carrying exact bit widths.
void export_csv(const SampleSet& samples, std::ostream& out);
SampleSet import_csv(std::istream& in);

}  // namespace skg
