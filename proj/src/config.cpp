#include "skg/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace skg {

namespace {

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "scenario.los", "scenario.dynamic", "scenario.snr_db", "scenario.num_taps",
      "scenario.delay_spread_s", "scenario.eve_offset_wavelengths", "scenario.carrier_freq_hz",
      "scenario.rician_k_db", "scenario.diffuse_power",
      "schedule.num_frames", "schedule.coherence_frames",
      "chirp.duration_s", "chirp.bandwidth_hz", "chirp.center_freq_hz", "chirp.sample_rate_hz",
      "sweep.filters", "sweep.levels", "sweep.code_rates", "sweep.scenarios",
      "code.block_len", "code.design_crossover", "code.channel_p_override",
      "quantizer.boundary_mode", "quantizer.sigma_span", "quantizer.per_filter",
      "filterbank.taps_per_filter",
      "entropy.mode", "entropy.secret_subblock_bits", "entropy.eve_chunk_bits",
      "entropy.syndrome_chunk_bits", "entropy.alphabet_budget_log2",
      "pipeline.output_path", "pipeline.rng_seed", "pipeline.round_trip_s",
      "pipeline.raw_entropy_product", "pipeline.dump_boundaries", "pipeline.dump_powers",
      "pipeline.threads",
  };
  return keys;
}

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string env_name(const std::string& key) {
  std::string out = "SKG_";
  for (char c : key) {
    out.push_back(c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument("config: " + key + " expects a boolean, got '" + v + "'");
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: " + key + " expects a number, got '" + v + "'");
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long d = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: " + key + " expects an integer, got '" + v + "'");
  }
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  auto& sc = cfg.scenario;
  if (key == "scenario.los") sc.los = parse_bool(key, value);
  else if (key == "scenario.dynamic") sc.dynamic = parse_bool(key, value);
  else if (key == "scenario.snr_db") sc.snr_db = parse_double(key, value);
  else if (key == "scenario.num_taps") sc.num_taps = static_cast<int>(parse_int(key, value));
  else if (key == "scenario.delay_spread_s") sc.delay_spread_s = parse_double(key, value);
  else if (key == "scenario.eve_offset_wavelengths") sc.eve_offset_wavelengths = parse_double(key, value);
  else if (key == "scenario.carrier_freq_hz") sc.carrier_freq_hz = parse_double(key, value);
  else if (key == "scenario.rician_k_db") sc.rician_k_db = parse_double(key, value);
  else if (key == "scenario.diffuse_power") sc.diffuse_power = parse_double(key, value);
  else if (key == "schedule.num_frames") cfg.schedule.num_frames = static_cast<std::size_t>(parse_int(key, value));
  else if (key == "schedule.coherence_frames") cfg.schedule.coherence_frames = static_cast<std::size_t>(parse_int(key, value));
  else if (key == "chirp.duration_s") cfg.chirp.duration_s = parse_double(key, value);
  else if (key == "chirp.bandwidth_hz") cfg.chirp.bandwidth_hz = parse_double(key, value);
  else if (key == "chirp.center_freq_hz") cfg.chirp.center_freq_hz = parse_double(key, value);
  else if (key == "chirp.sample_rate_hz") cfg.chirp.sample_rate_hz = parse_double(key, value);
  else if (key == "sweep.filters") {
    cfg.filters.clear();
    for (const auto& s : split_list(value)) cfg.filters.push_back(static_cast<int>(parse_int(key, s)));
  } else if (key == "sweep.levels") {
    cfg.levels.clear();
    for (const auto& s : split_list(value)) cfg.levels.push_back(static_cast<int>(parse_int(key, s)));
  } else if (key == "sweep.code_rates") {
    cfg.code_rates.clear();
    for (const auto& s : split_list(value)) cfg.code_rates.push_back(parse_double(key, s));
  } else if (key == "sweep.scenarios") {
    cfg.scenarios = split_list(value);
    if (cfg.scenarios.empty()) throw std::invalid_argument("config: sweep.scenarios is empty");
  } else if (key == "code.block_len") {
    cfg.block_len = static_cast<int>(parse_int(key, value));
  } else if (key == "code.design_crossover") {
    cfg.design_crossover = parse_double(key, value);
  } else if (key == "code.channel_p_override") {
    cfg.channel_p_override = parse_double(key, value);
  } else if (key == "quantizer.boundary_mode") {
    if (value == "mean-sigma") cfg.quantizer.boundary_mode = QuantizerSpec::Boundary::mean_sigma;
    else if (value == "global-minmax") cfg.quantizer.boundary_mode = QuantizerSpec::Boundary::global_minmax;
    else throw std::invalid_argument("config: unknown quantizer.boundary_mode '" + value + "'");
  } else if (key == "quantizer.sigma_span") {
    cfg.quantizer.sigma_span = parse_double(key, value);
  } else if (key == "quantizer.per_filter") {
    cfg.quantizer.per_filter = parse_bool(key, value);
  } else if (key == "filterbank.taps_per_filter") {
    cfg.taps_per_filter = static_cast<int>(parse_int(key, value));
  } else if (key == "entropy.mode") {
    if (value == "worst") cfg.estimator_mode = PipelineEstimator::worst_case;
    else if (value == "average") cfg.estimator_mode = PipelineEstimator::average_case;
    else if (value == "nn") cfg.estimator_mode = PipelineEstimator::nearest_neighbor;
    else throw std::invalid_argument("config: unknown entropy.mode '" + value + "'");
  } else if (key == "entropy.secret_subblock_bits") {
    cfg.secret_subblock_bits = static_cast<int>(parse_int(key, value));
  } else if (key == "entropy.eve_chunk_bits") {
    cfg.eve_chunk_bits = static_cast<int>(parse_int(key, value));
  } else if (key == "entropy.syndrome_chunk_bits") {
    cfg.syndrome_chunk_bits = static_cast<int>(parse_int(key, value));
  } else if (key == "entropy.alphabet_budget_log2") {
    const long long lg = parse_int(key, value);
    if (lg < 1 || lg > 62) throw std::invalid_argument("config: alphabet_budget_log2 out of range");
    cfg.alphabet_budget = 1ull << lg;
  } else if (key == "pipeline.output_path") {
    cfg.output_path = value;
  } else if (key == "pipeline.rng_seed") {
    cfg.rng_seed = static_cast<std::uint64_t>(parse_int(key, value));
  } else if (key == "pipeline.round_trip_s") {
    cfg.round_trip_s = parse_double(key, value);
  } else if (key == "pipeline.raw_entropy_product") {
    cfg.raw_entropy_product = parse_bool(key, value);
  } else if (key == "pipeline.dump_boundaries") {
    cfg.dump_boundaries = parse_bool(key, value);
  } else if (key == "pipeline.dump_powers") {
    cfg.dump_powers = parse_bool(key, value);
  } else if (key == "pipeline.threads") {
    cfg.threads = static_cast<int>(parse_int(key, value));
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

}  // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(lineno) + " is not key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("config: empty key on line " + std::to_string(lineno));
    }
    kv[key] = value;
  }
  return kv;
}

ExperimentConfig config_from_kv(const std::map<std::string, std::string>& kv,
                                bool apply_env_overrides) {
  ExperimentConfig cfg;
  for (const auto& [key, value] : kv) {
    if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end()) {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    apply_key(cfg, key, value);
  }
  if (apply_env_overrides) {
    for (const auto& key : known_keys()) {
      if (const char* env = std::getenv(env_name(key).c_str())) {
        apply_key(cfg, key, env);
      }
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_kv(parse_config_text(buf.str()));
}

ExperimentConfig default_config() {
  return config_from_kv({});
}

}  // namespace skg
