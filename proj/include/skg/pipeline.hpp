#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skg/channel.hpp"
#include "skg/entropy.hpp"
#include "skg/quantizer.hpp"
#include "skg/waveform.hpp"

namespace skg {

enum class PipelineEstimator { worst_case, average_case, nearest_neighbor };

/// Everything a full sweep needs. Flat key=value config files map onto these
/// fields section by section (see config.hpp); env vars SKG_<SECTION>_<KEY>
/// override file values.
struct ExperimentConfig {
  ScenarioConfig scenario;
  FrameSchedule schedule;
  ChirpSpec chirp{17.1875e-6, 70e6, 3.75e9, 0.0};  // f_s = 0 -> critical sampling

  std::vector<int> filters = {8, 16, 32, 64};
  std::vector<int> levels = {4, 16};
  std::vector<double> code_rates = {0.1, 0.3, 0.5, 0.7, 0.9};
  std::vector<std::string> scenarios = {"base"};  // or named LoS/NLoS variants

  int block_len = 1024;
  double design_crossover = 0.05;
  double channel_p_override = -1.0;  // < 0: estimate from the run's mismatch

  QuantizerSpec quantizer;
  int taps_per_filter = 8;  // prototype length = taps_per_filter * N

  PipelineEstimator estimator_mode = PipelineEstimator::worst_case;
  int secret_subblock_bits = 8;
  int eve_chunk_bits = 8;
  int syndrome_chunk_bits = 8;
  std::uint64_t alphabet_budget = kDefaultAlphabetBudget;

  std::string output_path = "skg_report.csv";
  std::uint64_t rng_seed = 1;
  double round_trip_s = 0.0;  // 0 -> 2 * chirp duration
  bool raw_entropy_product = false;
  bool dump_boundaries = false;
  bool dump_powers = false;  // debug sidecar with raw per-filter powers
  int threads = 1;

  double resolved_sample_rate() const;
  double resolved_round_trip() const;
  void validate() const;
};

/// One sweep cell of the report (CSV row).
struct KeyRateRow {
  std::string scenario;
  int n_filters = 0;
  int q_levels = 0;
  double code_rate = 0.0;
  int f_bits = 0;
  double ab_mismatch = 0.0;
  double eve_mismatch = 0.0;
  double fer = 0.0;
  double eve_fer = 0.0;
  double h_cond_bits = 0.0;
  double rate_per_use = 0.0;
  double rate_bps_hz = 0.0;
  double rate_bps = 0.0;
  std::string warnings;

  std::string key_hex;  // demo key, reported outside the CSV schema
  bool errored = false;
};

struct RunResult {
  std::vector<KeyRateRow> rows;
  std::size_t failed_cells = 0;
  std::string boundaries_dump;  // populated when dump_boundaries is set
  std::string powers_dump;      // populated when dump_powers is set
};

/// R = F * (1 - FER) * h_norm, with h_norm the per-bit normalized
/// conditional min-entropy in [0, 1].
double key_rate(double frame_bits, double fer, double h_norm);

/// Unit conversions for the Table-1 style summaries.
double to_bps(double rate_per_use, double round_trip_s);
double to_bps_hz(double rate_per_use, double round_trip_s, double bandwidth_hz);

/// Simulates every (scenario, N, Q, code_rate) cell: probe, channel, noise,
/// filterbank powers, quantization, reconciliation, entropy estimate and
/// amplification. Deterministic in (cfg, rng_seed) regardless of thread
/// count. A failing cell produces an error row, not a failed run.
RunResult run_experiment(const ExperimentConfig& cfg);

/// Pinned CSV schema, rows sorted by (scenario, N, Q, code_rate), floats
/// with 6 significant digits.
std::string render_csv(const std::vector<KeyRateRow>& rows);

void write_run_output(const RunResult& result, const ExperimentConfig& cfg);

}  // namespace skg
