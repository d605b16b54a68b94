#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cotans/acoustic_sim.hpp"
#include "cotans/bei_decoder.hpp"
#include "cotans/classical.hpp"
#include "cotans/cotans_image.hpp"
#include "cotans/delay_estimation.hpp"
#include "cotans/sampler.hpp"

namespace cotans {

enum class FrontEnd { Sage, MatchedFilter };

/// How boundaries that no estimate was matched to enter the range RMSE.
enum class MissPolicy {
  Exclude,   // dropped from the sums, reported as a miss count
  Penalize,  // contribute miss_penalty_m (and 180 deg) as their error
};

/// Everything one experiment needs. Loaded from a key=value file; see
/// config_keys() for the schema.
struct ExperimentConfig {
  SamplerConfig sampler;
  PulseSpec pulse;
  GridSpec grid;
  DecoderOptions decoder;
  ClassicalOptions classical;
  SageOptions sage;
  FrontEnd front_end{FrontEnd::Sage};
  std::size_t n_paths{3};
  MissPolicy miss_policy{MissPolicy::Exclude};
  double miss_penalty_m{10.0};

  std::vector<double> snrs{13, 14, 15, 16, 17, 18, 19, 20, 21};
  int trials{200};
  std::uint64_t seed{1};
  int threads{0};  // 0 = hardware concurrency
};

void validate(const ExperimentConfig& cfg);

/// Key, default value, and a one-line description for every setting.
struct ConfigKey {
  std::string key;
  std::string description;
};
const std::vector<ConfigKey>& config_keys();

/// Applies one setting. Throws std::invalid_argument on an unknown key or a
/// malformed value.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Reads `key = value` lines; '#' starts a comment.
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

/// Every key with its current value; loading the text back reproduces cfg.
std::string dump_config(const ExperimentConfig& cfg);

std::vector<double> parse_double_list(const std::string& text);
std::string format_number(double v);

}  // namespace cotans
