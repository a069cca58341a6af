// Command-line front end: full sweep runs, a Table-style rate summary, and
// two standalone numerical checkers (Gamma moment match, entropy oracle).

#include <cmath>
#include <cstdio>
#include <iostream>
#include <span>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "skg/amplification.hpp"
#include "skg/config.hpp"
#include "skg/entropy.hpp"
#include "skg/filterbank.hpp"
#include "skg/pipeline.hpp"
#include "skg/rng.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitPartialFailure = 3;

skg::ExperimentConfig load_or_default(const std::string& config_path) {
  if (config_path.empty()) return skg::default_config();
  return skg::load_config_file(config_path);
}

int cmd_run(const std::string& config_path, const std::string& out_path, long long seed,
            int threads, bool verbose) {
  skg::ExperimentConfig cfg;
  try {
    cfg = load_or_default(config_path);
    if (!out_path.empty()) cfg.output_path = out_path;
    if (seed >= 0) cfg.rng_seed = static_cast<std::uint64_t>(seed);
    if (threads > 0) cfg.threads = threads;
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  const auto result = skg::run_experiment(cfg);
  skg::write_run_output(result, cfg);
  std::cout << "wrote " << result.rows.size() << " rows to " << cfg.output_path << "\n";
  if (verbose) {
    for (const auto& row : result.rows) {
      if (row.key_hex.empty()) continue;
      std::cout << row.scenario << " N=" << row.n_filters << " Q=" << row.q_levels
                << " rate=" << row.code_rate << " key=" << row.key_hex << "\n";
    }
  }
  if (result.failed_cells > 0) {
    std::cerr << result.failed_cells << " cell(s) failed; see the warnings column\n";
    return kExitPartialFailure;
  }
  return kExitOk;
}

int cmd_sweep_table(const std::string& config_path, int n_filters, int q_levels, double rate) {
  skg::ExperimentConfig cfg;
  try {
    cfg = load_or_default(config_path);
    cfg.scenarios = {"nlos-dynamic", "nlos-static", "los-dynamic", "los-static"};
    cfg.filters = {n_filters};
    cfg.levels = {q_levels};
    cfg.code_rates = {rate};
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  const auto result = skg::run_experiment(cfg);
  const double round_trip = cfg.resolved_round_trip();
  std::printf("%-14s %12s %14s %12s\n", "scenario", "rate/use", "rate [b/s/Hz]", "rate [b/s]");
  for (const auto& row : result.rows) {
    std::printf("%-14s %12.4f %14.6f %12.0f\n", row.scenario.c_str(), row.rate_per_use,
                row.rate_bps_hz, row.rate_bps);
  }
  std::printf("(N=%d, Q=%d, code rate %.2f, round trip %.3g s, B %.3g Hz)\n", n_filters, q_levels,
              rate, round_trip, cfg.chirp.bandwidth_hz);
  return result.failed_cells > 0 ? kExitPartialFailure : kExitOk;
}

int cmd_gamma_check(int sets, int draws, long long seed) {
  skg::Rng rng(static_cast<std::uint64_t>(seed));
  int failures = 0;
  for (int set = 0; set < sets; ++set) {
    const int m = 1 + static_cast<int>(rng.next_u64() % 5);
    std::vector<skg::GammaParams> comps;
    for (int i = 0; i < m; ++i) {
      comps.push_back({0.5 + 3.5 * rng.uniform(), 0.2 + 1.8 * rng.uniform()});
    }
    const double noise_var = 0.5 * rng.uniform();
    const double k_samples = 4.0 + std::floor(60.0 * rng.uniform());
    const auto fit = skg::gamma_approx(comps, noise_var, k_samples);

    double sum = 0.0;
    double sum2 = 0.0;
    for (int d = 0; d < draws; ++d) {
      double v = 0.0;
      for (const auto& c : comps) v += rng.gamma(c.shape, c.scale);
      if (noise_var > 0.0) {
        v += rng.gamma((k_samples - 1.0) / 2.0, 4.0 * noise_var / (k_samples - 1.0));
      }
      sum += v;
      sum2 += v * v;
    }
    const double mean = sum / draws;
    const double var = sum2 / draws - mean * mean;
    const double mean_err = std::fabs(mean - fit.mean()) / fit.mean();
    const double var_err = std::fabs(var - fit.variance()) / fit.variance();
    const bool ok = mean_err < 0.03 && var_err < 0.10;
    if (!ok) ++failures;
    std::printf("set %2d: M=%d sigma2=%.3f K=%4.0f mean err %.4f  var err %.4f  %s\n", set, m,
                noise_var, k_samples, mean_err, var_err, ok ? "ok" : "FAIL");
  }
  return failures == 0 ? kExitOk : 1;
}

int cmd_entropy_oracle(int tables, int draws, long long seed) {
  skg::Rng rng(static_cast<std::uint64_t>(seed));
  int failures = 0;
  for (int t = 0; t < tables; ++t) {
    const std::uint32_t sbits = 1 + static_cast<std::uint32_t>(rng.next_u64() % 8);
    const std::uint32_t obits = 1 + static_cast<std::uint32_t>(rng.next_u64() % 8);
    const std::uint64_t n_sec = 1ull << sbits;
    const std::uint64_t n_obs = 1ull << obits;

    skg::JointTable table;
    table.secret_bits = sbits;
    table.observation_bits = obits;
    table.p.assign(n_sec * n_obs, 0.0);
    std::vector<double> obs_marginal(n_obs);
    double total = 0.0;
    for (auto& v : obs_marginal) {
      v = 1.0 + rng.uniform();  // near-uniform marginal keeps all cells supported
      total += v;
    }
    for (auto& v : obs_marginal) v /= total;
    for (std::uint64_t o = 0; o < n_obs; ++o) {
      const double beta = 0.4 + 0.4 * rng.uniform();
      const auto spike = static_cast<std::uint64_t>(rng.next_u64() % n_sec);
      for (std::uint64_t a = 0; a < n_sec; ++a) {
        double p_cond = (1.0 - beta) / static_cast<double>(n_sec);
        if (a == spike) p_cond += beta;
        table.at(a, o) = obs_marginal[o] * p_cond;
      }
    }

    std::vector<double> cumulative(table.p.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < table.p.size(); ++i) {
      acc += table.p[i];
      cumulative[i] = acc;
    }
    skg::SampleSet samples;
    samples.records.reserve(static_cast<std::size_t>(draws));
    for (int d = 0; d < draws; ++d) {
      const double u = rng.uniform();
      const auto cell = static_cast<std::size_t>(
          std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
      samples.records.push_back({skg::Symbol{cell >> obits, sbits},
                                 skg::Symbol{cell & (n_obs - 1), obits}});
    }

    const double exact = skg::cond_min_entropy(table, skg::CondMode::worst_case).bits;
    const double freq = skg::cond_min_entropy(samples, skg::CondMode::worst_case).bits;
    const double delta = std::fabs(exact - freq);
    const bool ok = delta < 0.05;
    if (!ok) ++failures;
    std::printf("table %2d: %ux%u bits exact %.4f freq %.4f |delta| %.4f  %s\n", t, sbits, obits,
                exact, freq, delta, ok ? "ok" : "FAIL");
  }
  return failures == 0 ? kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Filterbank secret key generation simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  long long seed = -1;
  int threads = 0;
  bool verbose = false;

  auto* run = app.add_subcommand("run", "Run the configured sweep and write the CSV report");
  run->add_option("--config", config_path, "Config file (flat key=value)");
  run->add_option("--out", out_path, "Output CSV path (overrides pipeline.output_path)");
  run->add_option("--seed", seed, "RNG seed (overrides pipeline.rng_seed)");
  run->add_option("--threads", threads, "Worker threads (overrides pipeline.threads)");
  run->add_flag("--verbose", verbose, "Print per-cell demo keys");

  int table_n = 16;
  int table_q = 16;
  double table_rate = 0.1;
  auto* sweep = app.add_subcommand("sweep-table", "Print the four-scenario rate summary");
  sweep->add_option("--config", config_path, "Config file (flat key=value)");
  sweep->add_option("--filters", table_n, "Number of filters N");
  sweep->add_option("--levels", table_q, "Quantization levels Q");
  sweep->add_option("--rate", table_rate, "Code rate");

  int gamma_sets = 20;
  int gamma_draws = 100000;
  long long tool_seed = 1;
  auto* gamma = app.add_subcommand("gamma-check", "Monte Carlo check of the Gamma moment match");
  gamma->add_option("--sets", gamma_sets, "Number of random component sets");
  gamma->add_option("--draws", gamma_draws, "Monte Carlo draws per set");
  gamma->add_option("--seed", tool_seed, "RNG seed");

  int oracle_tables = 20;
  int oracle_draws = 1000000;
  auto* oracle = app.add_subcommand("entropy-oracle", "Exact vs frequentist on random joint tables");
  oracle->add_option("--tables", oracle_tables, "Number of random tables");
  oracle->add_option("--draws", oracle_draws, "Samples per table");
  oracle->add_option("--seed", tool_seed, "RNG seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_path, seed, threads, verbose);
    if (sweep->parsed()) return cmd_sweep_table(config_path, table_n, table_q, table_rate);
    if (gamma->parsed()) return cmd_gamma_check(gamma_sets, gamma_draws, tool_seed);
    if (oracle->parsed()) return cmd_entropy_oracle(oracle_tables, oracle_draws, tool_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
