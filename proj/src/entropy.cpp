#include "skg/entropy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace skg {

namespace {

constexpr std::size_t kLowSupportThreshold = 5;

struct PairHash {
  std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& p) const {
    std::uint64_t h = p.first * 0x9e3779b97f4a7c15ull;
    h ^= p.second + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

double clamp_bits(double bits, std::uint32_t secret_bit_len) {
  return std::clamp(bits, 0.0, static_cast<double>(secret_bit_len));
}

void check_budget(std::uint32_t secret_bits, std::uint32_t obs_bits, std::uint64_t budget) {
  if (secret_bits + obs_bits >= 63 ||
      (1ull << (secret_bits + obs_bits)) > budget) {
    throw std::domain_error("entropy: joint alphabet exceeds the configured budget");
  }
}

std::string to_hex(const Symbol& s) {
  const std::uint32_t digits = (s.bit_len + 3) / 4;
  std::string out(digits == 0 ? 1 : digits, '0');
  std::uint64_t v = s.value;
  for (std::size_t i = out.size(); i-- > 0 && v != 0;) {
    out[i] = "0123456789abcdef"[v & 0xf];
    v >>= 4;
  }
  return out;
}

std::uint64_t from_hex(const std::string& hex) {
  std::uint64_t v = 0;
  for (char c : hex) {
    v <<= 4;
    if (c >= '0' && c <= '9') {
      v |= static_cast<std::uint64_t>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      v |= static_cast<std::uint64_t>(c - 'a' + 10);
    } else if (c >= 'A' && c <= 'F') {
      v |= static_cast<std::uint64_t>(c - 'A' + 10);
    } else {
      throw std::invalid_argument("import_csv: invalid hex digit");
    }
  }
  return v;
}

}  // namespace

Symbol pack_symbol(std::span<const std::uint8_t> bits) {
  if (bits.size() > 64) throw std::invalid_argument("pack_symbol: symbols are capped at 64 bits");
  Symbol s;
  s.bit_len = static_cast<std::uint32_t>(bits.size());
  for (auto b : bits) s.value = (s.value << 1) | (b & 1u);
  return s;
}

Bits unpack_symbol(const Symbol& s) {
  Bits out(s.bit_len);
  for (std::uint32_t i = 0; i < s.bit_len; ++i) {
    out[i] = static_cast<std::uint8_t>((s.value >> (s.bit_len - 1 - i)) & 1u);
  }
  return out;
}

std::uint32_t SampleSet::secret_bits() const {
  return records.empty() ? 0 : records.front().secret.bit_len;
}

std::uint32_t SampleSet::observation_bits() const {
  return records.empty() ? 0 : records.front().observation.bit_len;
}

void SampleSet::validate() const {
  if (records.empty()) throw std::invalid_argument("SampleSet: needs at least one record");
  for (const auto& r : records) {
    if (r.secret.bit_len != secret_bits() || r.observation.bit_len != observation_bits()) {
      throw std::invalid_argument("SampleSet: inconsistent symbol widths");
    }
  }
}

double& JointTable::at(std::uint64_t secret, std::uint64_t obs) {
  return p[(secret << observation_bits) | obs];
}

double JointTable::at(std::uint64_t secret, std::uint64_t obs) const {
  return p[(secret << observation_bits) | obs];
}

void JointTable::validate() const {
  if (secret_bits + observation_bits >= 63) throw std::invalid_argument("JointTable: too large");
  if (p.size() != (1ull << (secret_bits + observation_bits))) {
    throw std::invalid_argument("JointTable: cell count mismatch");
  }
  double sum = 0.0;
  for (double v : p) {
    if (v < 0.0) throw std::invalid_argument("JointTable: negative probability");
    sum += v;
  }
  if (std::fabs(sum - 1.0) > 1e-9) throw std::invalid_argument("JointTable: does not sum to 1");
}

EntropyEstimate min_entropy(std::span<const double> distribution, std::uint32_t secret_bit_len) {
  if (distribution.empty()) throw std::invalid_argument("min_entropy: empty distribution");
  double max_p = 0.0;
  for (double v : distribution) max_p = std::max(max_p, v);
  if (!(max_p > 0.0)) throw std::invalid_argument("min_entropy: all-zero distribution");

  EntropyEstimate e;
  e.bits = clamp_bits(-std::log2(max_p), secret_bit_len);
  e.estimator = EstimatorKind::exact;
  e.secret_bit_len = secret_bit_len;
  return e;
}

EntropyEstimate min_entropy(const SampleSet& samples, std::uint64_t alphabet_budget) {
  samples.validate();
  check_budget(samples.secret_bits(), 0, alphabet_budget);

  std::unordered_map<std::uint64_t, std::size_t> counts;
  for (const auto& r : samples.records) ++counts[r.secret.value];
  std::size_t max_count = 0;
  for (const auto& [v, c] : counts) max_count = std::max(max_count, c);

  EntropyEstimate e;
  e.bits = clamp_bits(-std::log2(static_cast<double>(max_count) / samples.records.size()),
                      samples.secret_bits());
  e.estimator = EstimatorKind::frequentist;
  e.secret_bit_len = samples.secret_bits();
  e.sample_count = samples.records.size();
  return e;
}

EntropyEstimate cond_min_entropy(const JointTable& joint, CondMode mode) {
  joint.validate();
  const std::uint64_t n_obs = 1ull << joint.observation_bits;
  const std::uint64_t n_sec = 1ull << joint.secret_bits;

  double worst_max = 0.0;
  double guess_sum = 0.0;
  for (std::uint64_t o = 0; o < n_obs; ++o) {
    double p_o = 0.0;
    double max_cell = 0.0;
    for (std::uint64_t a = 0; a < n_sec; ++a) {
      const double v = joint.at(a, o);
      p_o += v;
      max_cell = std::max(max_cell, v);
    }
    if (p_o <= 0.0) continue;
    worst_max = std::max(worst_max, max_cell / p_o);
    guess_sum += max_cell;  // p(o) * max_a p(a|o)
  }

  EntropyEstimate e;
  e.estimator = EstimatorKind::exact;
  e.mode = mode;
  e.conditional = true;
  e.secret_bit_len = joint.secret_bits;
  const double p_guess = mode == CondMode::worst_case ? worst_max : guess_sum;
  e.bits = clamp_bits(-std::log2(p_guess), joint.secret_bits);
  return e;
}

EntropyEstimate cond_min_entropy(const SampleSet& samples, CondMode mode,
                                 std::uint64_t alphabet_budget) {
  samples.validate();
  check_budget(samples.secret_bits(), samples.observation_bits(), alphabet_budget);

  std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, std::size_t, PairHash> joint;
  std::unordered_map<std::uint64_t, std::size_t> obs_counts;
  for (const auto& r : samples.records) {
    ++joint[{r.secret.value, r.observation.value}];
    ++obs_counts[r.observation.value];
  }

  std::unordered_map<std::uint64_t, std::size_t> obs_max;
  for (const auto& [key, c] : joint) {
    auto& m = obs_max[key.second];
    m = std::max(m, c);
  }

  const double total = static_cast<double>(samples.records.size());
  double worst_max = 0.0;
  double guess_sum = 0.0;
  std::size_t low_support = 0;
  for (const auto& [obs, max_c] : obs_max) {
    const std::size_t n_o = obs_counts[obs];
    if (n_o < kLowSupportThreshold) ++low_support;
    worst_max = std::max(worst_max, static_cast<double>(max_c) / n_o);
    guess_sum += static_cast<double>(max_c) / total;
  }

  EntropyEstimate e;
  e.estimator = EstimatorKind::frequentist;
  e.mode = mode;
  e.conditional = true;
  e.secret_bit_len = samples.secret_bits();
  e.sample_count = samples.records.size();
  e.low_support_warnings = low_support;
  const double p_guess = mode == CondMode::worst_case ? worst_max : guess_sum;
  e.bits = clamp_bits(-std::log2(p_guess), samples.secret_bits());
  return e;
}

double leakage(const EntropyEstimate& h_uncond, const EntropyEstimate& h_cond) {
  if (h_uncond.secret_bit_len != h_cond.secret_bit_len) {
    throw std::invalid_argument("leakage: secret bit-lengths differ");
  }
  const bool families_match =
      (h_uncond.estimator == EstimatorKind::exact) == (h_cond.estimator == EstimatorKind::exact);
  if (!families_match) throw std::invalid_argument("leakage: estimator mode mismatch");
  return h_uncond.bits - h_cond.bits;
}

EntropyEstimate nn_estimate(const SampleSet& samples, std::uint64_t alphabet_budget) {
  samples.validate();
  if (samples.records.size() < 2) throw std::invalid_argument("nn_estimate: needs >= 2 records");
  check_budget(samples.secret_bits(), samples.observation_bits(), alphabet_budget);

  // Bucket records by exact observation value: distance-0 neighbors come
  // from the same bucket, and only singleton buckets need a search across
  // distinct observation values.
  struct Bucket {
    std::vector<std::size_t> indices;  // ascending record indices
  };
  std::unordered_map<std::uint64_t, Bucket> buckets;
  for (std::size_t i = 0; i < samples.records.size(); ++i) {
    buckets[samples.records[i].observation.value].indices.push_back(i);
  }

  if (buckets.size() == 1) {
    auto e = min_entropy(samples, alphabet_budget);
    e.conditional = true;
    e.estimator = EstimatorKind::frequentist;  // degenerate fallback, flagged
    return e;
  }

  std::vector<std::uint64_t> distinct;
  distinct.reserve(buckets.size());
  for (const auto& [v, b] : buckets) distinct.push_back(v);
  std::sort(distinct.begin(), distinct.end());

  std::size_t correct = 0;
  for (const auto& [obs_value, bucket] : buckets) {
    if (bucket.indices.size() >= 2) {
      const std::size_t first = bucket.indices[0];
      const std::size_t second = bucket.indices[1];
      for (std::size_t idx : bucket.indices) {
        const std::size_t neighbor = (idx == first) ? second : first;
        if (samples.records[idx].secret.value == samples.records[neighbor].secret.value) ++correct;
      }
      continue;
    }
    // Singleton: nearest other observation value, ties by smallest index.
    const std::size_t idx = bucket.indices[0];
    int best_dist = 65;
    std::size_t best_index = samples.records.size();
    for (std::uint64_t other : distinct) {
      if (other == obs_value) continue;
      const int d = std::popcount(obs_value ^ other);
      const std::size_t cand = buckets[other].indices[0];
      if (d < best_dist || (d == best_dist && cand < best_index)) {
        best_dist = d;
        best_index = cand;
      }
    }
    if (samples.records[idx].secret.value == samples.records[best_index].secret.value) ++correct;
  }

  const double floor_p = std::pow(2.0, -static_cast<double>(samples.secret_bits()));
  const double p_nn = std::max(static_cast<double>(correct) / samples.records.size(), floor_p);

  EntropyEstimate e;
  e.bits = clamp_bits(-std::log2(p_nn), samples.secret_bits());
  e.estimator = EstimatorKind::nearest_neighbor;
  e.conditional = true;
  e.secret_bit_len = samples.secret_bits();
  e.sample_count = samples.records.size();
  return e;
}

void export_csv(const SampleSet& samples, std::ostream& out) {
  samples.validate();
  out << "secret_hex,observation_hex\n";
  out << "# bits=" << samples.secret_bits() << "," << samples.observation_bits() << "\n";
  for (const auto& r : samples.records) {
    out << to_hex(r.secret) << "," << to_hex(r.observation) << "\n";
  }
}

SampleSet import_csv(std::istream& in) {
  SampleSet set;
  std::string line;
  std::uint32_t secret_bits = 0;
  std::uint32_t obs_bits = 0;
  bool have_widths = false;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# bits=", 0) == 0) {
      std::istringstream ss(line.substr(7));
      char comma = 0;
      ss >> secret_bits >> comma >> obs_bits;
      if (comma != ',') throw std::invalid_argument("import_csv: malformed bits comment");
      have_widths = true;
      continue;
    }
    if (line.front() == '#') continue;
    if (!have_header) {
      if (line != "secret_hex,observation_hex") {
        throw std::invalid_argument("import_csv: unexpected header");
      }
      have_header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("import_csv: malformed row");
    const std::string sec = line.substr(0, comma);
    const std::string obs = line.substr(comma + 1);
    SampleRecord r;
    r.secret.value = from_hex(sec);
    r.observation.value = from_hex(obs);
    r.secret.bit_len = have_widths ? secret_bits : static_cast<std::uint32_t>(4 * sec.size());
    r.observation.bit_len = have_widths ? obs_bits : static_cast<std::uint32_t>(4 * obs.size());
    set.records.push_back(r);
  }
  set.validate();
  return set;
}

}  // namespace skg
