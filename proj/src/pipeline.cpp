#include "skg/pipeline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "skg/amplification.hpp"
#include "skg/filterbank.hpp"
#include "skg/polar.hpp"
#include "skg/rng.hpp"

namespace skg {

namespace {

enum StreamTag : std::uint64_t {
  kTagScenario = 0x5ce0,
  kTagChannel = 0xc4a0,
  kTagEveChannel = 0xe5e0,
  kTagNoise = 0x105e,
  kTagAmplify = 0xa3b0,
};

constexpr int kPartyAlice = 0;
constexpr int kPartyBob = 1;
constexpr int kPartyEve = 2;

struct ScenarioVariant {
  std::string name;
  ScenarioConfig cfg;
  std::size_t index = 0;
};

std::string scenario_name(const ScenarioConfig& s) {
  return std::string(s.los ? "los" : "nlos") + (s.dynamic ? "-dynamic" : "-static");
}

std::vector<ScenarioVariant> resolve_variants(const ExperimentConfig& cfg) {
  std::vector<ScenarioVariant> out;
  for (std::size_t i = 0; i < cfg.scenarios.size(); ++i) {
    ScenarioVariant v;
    v.cfg = cfg.scenario;
    v.index = i;
    const std::string& tag = cfg.scenarios[i];
    if (tag == "base") {
      // keep flags as configured
    } else if (tag == "los-static") {
      v.cfg.los = true;
      v.cfg.dynamic = false;
    } else if (tag == "los-dynamic") {
      v.cfg.los = true;
      v.cfg.dynamic = true;
    } else if (tag == "nlos-static") {
      v.cfg.los = false;
      v.cfg.dynamic = false;
    } else if (tag == "nlos-dynamic") {
      v.cfg.los = false;
      v.cfg.dynamic = true;
    } else {
      throw std::invalid_argument("config: unknown scenario variant '" + tag + "'");
    }
    v.name = scenario_name(v.cfg);
    out.push_back(std::move(v));
  }
  return out;
}

struct BankState {
  Filterbank bank;
  bool ok = true;
  std::string error;
};

/// Per-scenario simulation products: powers[bank][party][frame].
struct ScenarioPowers {
  std::vector<std::array<std::vector<PowerVector>, 3>> powers;
};

ScenarioPowers simulate_scenario(const ExperimentConfig& cfg, const ScenarioVariant& variant,
                                 std::vector<BankState>& banks, const ComplexSignal& probe,
                                 const ChirpSpec& chirp) {
  const std::size_t frames = cfg.schedule.num_frames;
  const std::uint64_t sseed = derive_stream(cfg.rng_seed, {kTagScenario, variant.index});
  const double noise_var = noise_variance_for_snr(variant.cfg, chirp);

  const std::size_t coherence = variant.cfg.dynamic ? cfg.schedule.coherence_frames : frames;
  const std::size_t n_blocks = (frames + coherence - 1) / coherence;

  std::vector<MultipathChannel> legit(n_blocks);
  std::vector<MultipathChannel> eve(n_blocks);
  for (std::size_t b = 0; b < n_blocks; ++b) {
    Rng rng_ch(derive_stream(sseed, {kTagChannel, b}));
    legit[b] = sample_channel(variant.cfg, rng_ch);
    Rng rng_eve(derive_stream(sseed, {kTagEveChannel, b}));
    eve[b] = sample_eve_channel(variant.cfg, legit[b], rng_eve);
  }

  ScenarioPowers out;
  out.powers.resize(banks.size());
  for (auto& per_bank : out.powers) {
    for (auto& per_party : per_bank) per_party.resize(frames);
  }

  const double fc = variant.cfg.carrier_freq_hz;
  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t f = begin; f < end; ++f) {
      const std::size_t b = f / coherence;
      std::array<ComplexSignal, 3> received;
      for (int party = 0; party < 3; ++party) {
        Rng rng_noise(derive_stream(sseed, {kTagNoise, static_cast<std::uint64_t>(party), f}));
        const MultipathChannel& h = party == kPartyEve ? eve[b] : legit[b];
        received[static_cast<std::size_t>(party)] = apply_channel(probe, h, noise_var, rng_noise, fc);
      }
      for (std::size_t bi = 0; bi < banks.size(); ++bi) {
        if (!banks[bi].ok) continue;
        for (int party = 0; party < 3; ++party) {
          out.powers[bi][static_cast<std::size_t>(party)][f] =
              banks[bi].bank.measure(received[static_cast<std::size_t>(party)]);
        }
      }
    }
  };

  const int threads = std::max(1, cfg.threads);
  if (threads == 1 || frames < 2) {
    worker(0, frames);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (frames + threads - 1) / static_cast<std::size_t>(threads);
    for (int t = 0; t < threads; ++t) {
      const std::size_t begin = static_cast<std::size_t>(t) * chunk;
      const std::size_t end = std::min(frames, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  return out;
}

/// Splits a frame's bits into zero-padded code blocks.
std::vector<Bits> frame_blocks(const Bits& frame, int block_len) {
  const std::size_t n = static_cast<std::size_t>(block_len);
  const std::size_t count = (frame.size() + n - 1) / n;
  std::vector<Bits> blocks(count, Bits(n, 0));
  for (std::size_t i = 0; i < frame.size(); ++i) blocks[i / n][i % n] = frame[i];
  return blocks;
}

struct CellEntropy {
  double h_bits = 0.0;
  std::size_t low_support = 0;
};

CellEntropy estimate_cell_entropy(const ExperimentConfig& cfg,
                                  const std::vector<Bits>& alice_frames,
                                  const std::vector<Bits>& eve_frames,
                                  const std::vector<Bits>& syndrome_frames) {
  const std::size_t f_bits = alice_frames.front().size();
  const auto w = static_cast<std::size_t>(cfg.secret_subblock_bits);
  const std::size_t positions = (f_bits + w - 1) / w;
  const std::size_t s_len = syndrome_frames.front().size();

  CellEntropy total;
  for (std::size_t pos = 0; pos < positions; ++pos) {
    const std::size_t begin = pos * w;
    const std::size_t width = std::min(w, f_bits - begin);
    const std::size_t eve_width = std::min(width, static_cast<std::size_t>(cfg.eve_chunk_bits));
    const std::size_t syn_width = std::min(static_cast<std::size_t>(cfg.syndrome_chunk_bits), s_len);

    SampleSet set;
    set.records.reserve(alice_frames.size());
    for (std::size_t f = 0; f < alice_frames.size(); ++f) {
      Bits obs;
      obs.reserve(eve_width + syn_width);
      for (std::size_t i = 0; i < eve_width; ++i) obs.push_back(eve_frames[f][begin + i]);
      if (syn_width > 0) {
        const std::size_t start = (pos * syn_width) % s_len;
        for (std::size_t i = 0; i < syn_width; ++i) {
          obs.push_back(syndrome_frames[f][(start + i) % s_len]);
        }
      }
      SampleRecord rec;
      rec.secret = pack_symbol(std::span<const std::uint8_t>(alice_frames[f]).subspan(begin, width));
      rec.observation = pack_symbol(obs);
      set.records.push_back(rec);
    }

    EntropyEstimate est;
    switch (cfg.estimator_mode) {
      case PipelineEstimator::worst_case:
        est = cond_min_entropy(set, CondMode::worst_case, cfg.alphabet_budget);
        break;
      case PipelineEstimator::average_case:
        est = cond_min_entropy(set, CondMode::average_case, cfg.alphabet_budget);
        break;
      case PipelineEstimator::nearest_neighbor:
        est = nn_estimate(set, cfg.alphabet_budget);
        break;
    }
    total.h_bits += est.bits;
    total.low_support += est.low_support_warnings;
  }
  return total;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

double ExperimentConfig::resolved_sample_rate() const {
  return chirp.sample_rate_hz > 0.0 ? chirp.sample_rate_hz : chirp.bandwidth_hz;
}

double ExperimentConfig::resolved_round_trip() const {
  return round_trip_s > 0.0 ? round_trip_s : 2.0 * chirp.duration_s;
}

void ExperimentConfig::validate() const {
  scenario.validate();
  schedule.validate();
  ChirpSpec resolved = chirp;
  resolved.sample_rate_hz = resolved_sample_rate();
  resolved.validate();
  if (filters.empty() || levels.empty() || code_rates.empty() || scenarios.empty()) {
    throw std::invalid_argument("ExperimentConfig: sweep lists must be non-empty");
  }
  for (int n : filters) {
    if (n < 1) throw std::invalid_argument("ExperimentConfig: filter counts must be >= 1");
  }
  for (int q : levels) {
    if (q < 2 || (q & (q - 1)) != 0) {
      throw std::invalid_argument("ExperimentConfig: levels must be powers of two >= 2");
    }
  }
  for (double r : code_rates) {
    if (r < 0.0 || r > 1.0) throw std::invalid_argument("ExperimentConfig: code rates must be in [0, 1]");
  }
  if (block_len < 2 || (block_len & (block_len - 1)) != 0) {
    throw std::invalid_argument("ExperimentConfig: block_len must be a power of two >= 2");
  }
  if (design_crossover < 0.0 || design_crossover >= 0.5) {
    throw std::invalid_argument("ExperimentConfig: design_crossover must be in [0, 0.5)");
  }
  if (taps_per_filter < 1) throw std::invalid_argument("ExperimentConfig: taps_per_filter must be >= 1");
  if (secret_subblock_bits < 1 || secret_subblock_bits > 64) {
    throw std::invalid_argument("ExperimentConfig: secret_subblock_bits must be in 1..64");
  }
  if (eve_chunk_bits < 0 || syndrome_chunk_bits < 0) {
    throw std::invalid_argument("ExperimentConfig: chunk widths must be >= 0");
  }
  if (threads < 1) throw std::invalid_argument("ExperimentConfig: threads must be >= 1");
}

double key_rate(double frame_bits, double fer, double h_norm) {
  return frame_bits * (1.0 - fer) * h_norm;
}

double to_bps(double rate_per_use, double round_trip_s) {
  if (!(round_trip_s > 0.0)) throw std::invalid_argument("to_bps: round_trip_s must be > 0");
  return rate_per_use / round_trip_s;
}

double to_bps_hz(double rate_per_use, double round_trip_s, double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("to_bps_hz: bandwidth_hz must be > 0");
  return to_bps(rate_per_use, round_trip_s) / bandwidth_hz;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();

  ChirpSpec chirp = cfg.chirp;
  chirp.sample_rate_hz = cfg.resolved_sample_rate();
  const ComplexSignal probe = generate_chirp(chirp);
  const double round_trip = cfg.resolved_round_trip();

  std::vector<BankState> banks;
  banks.reserve(cfg.filters.size());
  for (int n : cfg.filters) {
    BankState state;
    try {
      FilterbankSpec spec;
      spec.num_filters = n;
      spec.bandwidth_hz = chirp.bandwidth_hz;
      spec.prototype_taps = cfg.taps_per_filter * n;
      state.bank = build_filterbank(spec, chirp.sample_rate_hz);
      if (probe.samples.size() < state.bank.prototype().size()) {
        state.ok = false;
        state.error = "prototype longer than the probe signal";
      }
    } catch (const std::exception& e) {
      state.ok = false;
      state.error = e.what();
    }
    banks.push_back(std::move(state));
  }

  std::map<double, PolarCodeSpec> codes;
  for (double r : cfg.code_rates) {
    if (codes.find(r) == codes.end()) {
      codes.emplace(r, construct_code(cfg.block_len, r, cfg.design_crossover));
    }
  }

  RunResult result;
  std::ostringstream boundaries;
  std::ostringstream powers_csv;
  if (cfg.dump_powers) powers_csv << "scenario,N,party,frame,filter,power\n";

  for (const auto& variant : resolve_variants(cfg)) {
    const ScenarioPowers sim = simulate_scenario(cfg, variant, banks, probe, chirp);

    if (cfg.dump_powers) {
      static const char* kParty[] = {"alice", "bob", "eve"};
      const std::size_t frame_cap = std::min<std::size_t>(cfg.schedule.num_frames, 100);
      for (std::size_t bi = 0; bi < banks.size(); ++bi) {
        if (!banks[bi].ok) continue;
        for (int party = 0; party < 3; ++party) {
          for (std::size_t f = 0; f < frame_cap; ++f) {
            const auto& p = sim.powers[bi][static_cast<std::size_t>(party)][f];
            for (std::size_t n = 0; n < p.size(); ++n) {
              powers_csv << variant.name << ',' << cfg.filters[bi] << ',' << kParty[party] << ','
                         << f << ',' << n << ',' << format_double(p[n]) << '\n';
            }
          }
        }
      }
    }

    for (std::size_t bi = 0; bi < banks.size(); ++bi) {
      const int n_filters = cfg.filters[bi];
      for (int q : cfg.levels) {
        QuantizerSpec qspec = cfg.quantizer;
        qspec.levels = q;
        const int f_bits = n_filters * qspec.bits_per_measurement();

        std::array<std::vector<Bits>, 3> bits;
        double ab_mismatch = 0.0;
        double eve_mismatch = 0.0;
        std::string cell_error;

        if (!banks[bi].ok) {
          cell_error = banks[bi].error;
        } else {
          try {
            for (int party = 0; party < 3; ++party) {
              const auto& frames = sim.powers[bi][static_cast<std::size_t>(party)];
              const Calibration cal = calibrate_frames(frames, qspec);
              if (cfg.dump_boundaries && party == kPartyAlice) {
                boundaries << variant.name << ",N=" << n_filters << ",Q=" << q << ",alice";
                for (const auto& row : cal.thresholds) {
                  boundaries << " |";
                  for (double t : row) boundaries << ' ' << format_double(t);
                }
                boundaries << '\n';
              }
              auto& out = bits[static_cast<std::size_t>(party)];
              out.reserve(frames.size());
              for (const auto& p : frames) out.push_back(quantize(p, cal, qspec));
            }
            double ab_total = 0.0;
            double eve_total = 0.0;
            for (std::size_t f = 0; f < bits[0].size(); ++f) {
              ab_total += mismatch_rate(bits[kPartyAlice][f], bits[kPartyBob][f]);
              eve_total += mismatch_rate(bits[kPartyAlice][f], bits[kPartyEve][f]);
            }
            ab_mismatch = ab_total / static_cast<double>(bits[0].size());
            eve_mismatch = eve_total / static_cast<double>(bits[0].size());
          } catch (const std::exception& e) {
            cell_error = e.what();
          }
        }

        for (double rate : cfg.code_rates) {
          KeyRateRow row;
          row.scenario = variant.name;
          row.n_filters = n_filters;
          row.q_levels = q;
          row.code_rate = rate;
          row.f_bits = f_bits;

          if (!cell_error.empty()) {
            row.errored = true;
            row.warnings = "error:" + cell_error;
            ++result.failed_cells;
            result.rows.push_back(std::move(row));
            continue;
          }

          try {
            const PolarCodeSpec& code = codes.at(rate);
            const double p_ab = cfg.channel_p_override >= 0.0
                                    ? cfg.channel_p_override
                                    : std::clamp(ab_mismatch, 1e-4, 0.4999);
            const double p_eve = cfg.channel_p_override >= 0.0
                                     ? cfg.channel_p_override
                                     : std::clamp(eve_mismatch, 1e-4, 0.4999);

            const std::size_t frames = bits[0].size();
            std::vector<std::uint8_t> bob_ok(frames, 1);
            std::vector<std::uint8_t> eve_ok(frames, 1);
            std::vector<Bits> syndrome_frames(frames);

            for (std::size_t f = 0; f < frames; ++f) {
              const auto blocks_a = frame_blocks(bits[kPartyAlice][f], cfg.block_len);
              const auto blocks_b = frame_blocks(bits[kPartyBob][f], cfg.block_len);
              const auto blocks_e = frame_blocks(bits[kPartyEve][f], cfg.block_len);
              Bits syn_concat;
              for (std::size_t blk = 0; blk < blocks_a.size(); ++blk) {
                const Syndrome s = compute_syndrome(blocks_a[blk], code);
                syn_concat.insert(syn_concat.end(), s.bits.begin(), s.bits.end());
                const Bits bob_hat = sc_decode(blocks_b[blk], s, code, p_ab);
                const Bits eve_hat = sc_decode(blocks_e[blk], s, code, p_eve);
                const std::size_t real =
                    std::min(static_cast<std::size_t>(cfg.block_len),
                             static_cast<std::size_t>(f_bits) - blk * static_cast<std::size_t>(cfg.block_len));
                for (std::size_t i = 0; i < real; ++i) {
                  if (bob_hat[i] != blocks_a[blk][i]) bob_ok[f] = 0;
                  if (eve_hat[i] != blocks_a[blk][i]) eve_ok[f] = 0;
                }
              }
              if (syn_concat.empty()) syn_concat.push_back(0);  // rate-1 placeholder
              syndrome_frames[f] = std::move(syn_concat);
            }
            row.fer = frame_error_rate(bob_ok);
            row.eve_fer = frame_error_rate(eve_ok);
            row.ab_mismatch = ab_mismatch;
            row.eve_mismatch = eve_mismatch;

            const CellEntropy ent = estimate_cell_entropy(cfg, bits[kPartyAlice], bits[kPartyEve],
                                                          syndrome_frames);
            row.h_cond_bits = std::min(ent.h_bits, static_cast<double>(f_bits));

            std::vector<std::string> warn;
            if (ent.low_support > 0) warn.push_back("low-support=" + std::to_string(ent.low_support));
            if (cfg.raw_entropy_product) {
              warn.push_back("raw-entropy-product");
              row.rate_per_use = key_rate(static_cast<double>(f_bits), row.fer, row.h_cond_bits);
            } else {
              row.rate_per_use = key_rate(static_cast<double>(f_bits), row.fer,
                                          row.h_cond_bits / static_cast<double>(f_bits));
            }
            row.rate_bps = to_bps(row.rate_per_use, round_trip);
            row.rate_bps_hz = to_bps_hz(row.rate_per_use, round_trip, chirp.bandwidth_hz);

            // Demonstration key from the first frame at the entropy-justified
            // length, hashed with a public Toeplitz seed.
            EntropyEstimate for_len;
            for_len.bits = row.h_cond_bits;
            const std::size_t target = key_length(for_len, static_cast<std::size_t>(f_bits));
            if (target > 0) {
              Rng amp_rng(derive_stream(cfg.rng_seed,
                                        {kTagAmplify, variant.index, static_cast<std::uint64_t>(n_filters),
                                         static_cast<std::uint64_t>(q),
                                         static_cast<std::uint64_t>(std::llround(rate * 10000.0))}));
              Bits seed(static_cast<std::size_t>(f_bits) + target - 1);
              for (auto& b : seed) b = static_cast<std::uint8_t>(amp_rng.next_u64() & 1u);
              row.key_hex = amplify(bits[kPartyAlice][0], target, seed).hex();
            }

            std::string joined;
            for (const auto& w : warn) {
              if (!joined.empty()) joined += ';';
              joined += w;
            }
            row.warnings = joined;
          } catch (const std::exception& e) {
            row.errored = true;
            row.warnings = std::string("error:") + e.what();
            ++result.failed_cells;
          }
          result.rows.push_back(std::move(row));
        }
      }
    }
  }

  std::sort(result.rows.begin(), result.rows.end(), [](const KeyRateRow& a, const KeyRateRow& b) {
    return std::tie(a.scenario, a.n_filters, a.q_levels, a.code_rate) <
           std::tie(b.scenario, b.n_filters, b.q_levels, b.code_rate);
  });
  result.boundaries_dump = boundaries.str();
  result.powers_dump = powers_csv.str();
  return result;
}

std::string render_csv(const std::vector<KeyRateRow>& rows) {
  std::ostringstream out;
  out << "scenario,N,Q,code_rate,F_bits,ab_mismatch,eve_mismatch,fer,eve_fer,h_cond_bits,"
         "rate_per_use,rate_bps_hz,rate_bps,warnings\n";
  for (const auto& r : rows) {
    out << r.scenario << ',' << r.n_filters << ',' << r.q_levels << ',' << format_double(r.code_rate)
        << ',' << r.f_bits << ',' << format_double(r.ab_mismatch) << ','
        << format_double(r.eve_mismatch) << ',' << format_double(r.fer) << ','
        << format_double(r.eve_fer) << ',' << format_double(r.h_cond_bits) << ','
        << format_double(r.rate_per_use) << ',' << format_double(r.rate_bps_hz) << ','
        << format_double(r.rate_bps) << ',' << r.warnings << '\n';
  }
  return out.str();
}

void write_run_output(const RunResult& result, const ExperimentConfig& cfg) {
  std::ofstream out(cfg.output_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write output file '" + cfg.output_path + "'");
  out << render_csv(result.rows);
  if (cfg.dump_boundaries) {
    std::ofstream side(cfg.output_path + ".boundaries.txt", std::ios::binary);
    if (!side) throw std::runtime_error("cannot write boundaries sidecar");
    side << result.boundaries_dump;
  }
  if (cfg.dump_powers) {
    std::ofstream side(cfg.output_path + ".powers.csv", std::ios::binary);
    if (!side) throw std::runtime_error("cannot write powers sidecar");
    side << result.powers_dump;
  }
}

}  // namespace skg
