#include "cotans/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace cotans {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(key + ": not a number: '" + v + "'");
  }
  if (used != v.size()) throw std::invalid_argument(key + ": trailing characters in '" + v + "'");
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(key + ": not an integer: '" + v + "'");
  }
  if (used != v.size()) throw std::invalid_argument(key + ": trailing characters in '" + v + "'");
  return out;
}

struct Setting {
  ConfigKey doc;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define DOUBLE_SETTING(name, field, text)                                                   \
  Setting {                                                                                 \
    {name, text}, [](ExperimentConfig& c, const std::string& v) { c.field = to_double(name, v); }, \
        [](const ExperimentConfig& c) { return format_number(c.field); }                     \
  }
#define INT_SETTING(name, field, type, text)                                                \
  Setting {                                                                                 \
    {name, text},                                                                           \
        [](ExperimentConfig& c, const std::string& v) { c.field = static_cast<type>(to_int(name, v)); }, \
        [](const ExperimentConfig& c) { return std::to_string(c.field); }                   \
  }

const std::vector<Setting>& settings() {
  static const std::vector<Setting> table = {
      DOUBLE_SETTING("sound_speed", sampler.sound_speed, "speed of sound [m/s]"),
      INT_SETTING("n_receivers", sampler.n_receivers, int, "receivers per scenario"),
      INT_SETTING("n_max", sampler.n_max, int, "maximum boundaries per scenario (1 or 2)"),
      DOUBLE_SETTING("p_single", sampler.p_single, "probability that a scenario has one boundary"),
      DOUBLE_SETTING("rho_hi", sampler.rho_hi, "largest boundary range [m]"),
      DOUBLE_SETTING("rho_min_q1", sampler.rho_min[0], "minimum range, theta in [0,90) deg [m]"),
      DOUBLE_SETTING("rho_min_q2", sampler.rho_min[1], "minimum range, theta in [90,180) deg [m]"),
      DOUBLE_SETTING("rho_min_q3", sampler.rho_min[2], "minimum range, theta in [-180,-90) deg [m]"),
      DOUBLE_SETTING("rho_min_q4", sampler.rho_min[3], "minimum range, theta in [-90,0) deg [m]"),
      DOUBLE_SETTING("theta_min_sep_deg", sampler.theta_min_sep_deg, "minimum azimuth gap of two boundaries [deg]"),
      DOUBLE_SETTING("emitter_x", sampler.emitter_center.x, "emitter placement square centre x [m]"),
      DOUBLE_SETTING("emitter_y", sampler.emitter_center.y, "emitter placement square centre y [m]"),
      DOUBLE_SETTING("receiver_x", sampler.receiver_center.x, "receiver placement square centre x [m]"),
      DOUBLE_SETTING("receiver_y", sampler.receiver_center.y, "receiver placement square centre y [m]"),
      DOUBLE_SETTING("placement_width", sampler.placement_width, "side of both placement squares [m]"),
      INT_SETTING("max_draws", sampler.max_draws, int, "sampler rejection budget"),
      DOUBLE_SETTING("sample_rate", pulse.sample_rate, "sampling rate [Hz]"),
      DOUBLE_SETTING("pulse_duration", pulse.duration, "chirp duration [s]"),
      DOUBLE_SETTING("band_lo", pulse.band_lo, "chirp start frequency [Hz]"),
      DOUBLE_SETTING("band_hi", pulse.band_hi, "chirp end frequency [Hz]"),
      DOUBLE_SETTING("rho_max", grid.rho_max, "image range extent [m]"),
      INT_SETTING("n_rho", grid.n_rho, int, "image rows"),
      INT_SETTING("n_theta", grid.n_theta, int, "image columns"),
      INT_SETTING("decoder_n_max", decoder.n_max, int, "maximum detections per image"),
      DOUBLE_SETTING("decoder_threshold", decoder.threshold, "stop when the next peak is below this"),
      INT_SETTING("decoder_window", decoder.window, int, "centroid/suppression window [px, odd]"),
      INT_SETTING("classical_upsample", classical.upsample, int, "vote grid refinement of the classical decoder"),
      DOUBLE_SETTING("classical_threshold", classical.threshold, "classical peak threshold [fraction of max]"),
      DOUBLE_SETTING("classical_suppress_deg", classical.suppress_theta_deg, "azimuth half-band cleared per classical detection [deg]"),
      DOUBLE_SETTING("classical_vote_sigma", classical.vote_sigma, "classical vote spread [fine cells]"),
      Setting{{"classical_refine", "polish classical peaks to the best curve agreement: true or false"},
              [](ExperimentConfig& c, const std::string& v) {
                if (v == "true" || v == "1") c.classical.refine = true;
                else if (v == "false" || v == "0") c.classical.refine = false;
                else throw std::invalid_argument("classical_refine must be true or false");
              },
              [](const ExperimentConfig& c) { return std::string(c.classical.refine ? "true" : "false"); }},
      INT_SETTING("sage_max_iters", sage.max_iters, int, "SAGE cycle limit"),
      DOUBLE_SETTING("sage_tol_samples", sage.tol_samples, "SAGE convergence tolerance [samples]"),
      DOUBLE_SETTING("min_sep_samples", sage.min_sep_samples, "peak exclusion half-width [samples], 0 = auto"),
      INT_SETTING("n_paths", n_paths, std::size_t, "arrivals estimated per receiver (LOS included)"),
      Setting{{"front_end", "delay estimator: sage or mf"},
              [](ExperimentConfig& c, const std::string& v) {
                if (v == "sage") c.front_end = FrontEnd::Sage;
                else if (v == "mf") c.front_end = FrontEnd::MatchedFilter;
                else throw std::invalid_argument("front_end must be sage or mf");
              },
              [](const ExperimentConfig& c) {
                return std::string(c.front_end == FrontEnd::Sage ? "sage" : "mf");
              }},
      Setting{{"miss_policy", "exclude or penalize missed boundaries in the RMSE"},
              [](ExperimentConfig& c, const std::string& v) {
                if (v == "exclude") c.miss_policy = MissPolicy::Exclude;
                else if (v == "penalize") c.miss_policy = MissPolicy::Penalize;
                else throw std::invalid_argument("miss_policy must be exclude or penalize");
              },
              [](const ExperimentConfig& c) {
                return std::string(c.miss_policy == MissPolicy::Exclude ? "exclude" : "penalize");
              }},
      DOUBLE_SETTING("miss_penalty_m", miss_penalty_m, "range error charged per miss under penalize [m]"),
      Setting{{"snr_db", "comma-separated SNR list [dB]"},
              [](ExperimentConfig& c, const std::string& v) { c.snrs = parse_double_list(v); },
              [](const ExperimentConfig& c) {
                std::string out;
                for (std::size_t i = 0; i < c.snrs.size(); ++i) {
                  out += (i ? "," : "") + format_number(c.snrs[i]);
                }
                return out;
              }},
      INT_SETTING("trials", trials, int, "trials per SNR"),
      Setting{{"seed", "master seed"},
              [](ExperimentConfig& c, const std::string& v) {
                try {
                  std::size_t used = 0;
                  c.seed = std::stoull(v, &used);
                  if (used != v.size()) throw std::invalid_argument("trailing");
                } catch (const std::exception&) {
                  throw std::invalid_argument("seed: not an unsigned integer: '" + v + "'");
                }
              },
              [](const ExperimentConfig& c) { return std::to_string(c.seed); }},
      INT_SETTING("threads", threads, int, "worker threads, 0 = all cores"),
  };
  return table;
}

#undef DOUBLE_SETTING
#undef INT_SETTING

}  // namespace

std::string format_number(double v) {
  char buf[64];
  // Shortest round-trip digits; fixed notation for ordinary magnitudes.
  const double a = std::abs(v);
  const auto fmt = (a == 0.0 || (a >= 1e-4 && a < 1e15)) ? std::chars_format::fixed
                                                       : std::chars_format::general;
  const auto res = std::to_chars(buf, buf + sizeof buf, v, fmt);
  return std::string(buf, res.ptr);
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double("list", item));
  }
  if (out.empty()) throw std::invalid_argument("empty list: '" + text + "'");
  return out;
}

void validate(const ExperimentConfig& cfg) {
  validate(cfg.grid);
  validate(cfg.pulse);
  validate(cfg.decoder);
  validate(cfg.classical);
  validate(cfg.sampler, cfg.grid.rho_max);
  if (cfg.n_paths < 1) throw std::invalid_argument("n_paths must be at least 1");
  if (cfg.trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (cfg.sage.max_iters < 1) throw std::invalid_argument("sage_max_iters must be at least 1");
  if (!(cfg.sage.tol_samples > 0.0)) throw std::invalid_argument("sage_tol_samples must be positive");
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const auto& s : settings()) out.push_back(s.doc);
    return out;
  }();
  return keys;
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& s : settings()) {
    if (s.doc.key == key) {
      s.set(cfg, trim(value));
      return;
    }
  }
  throw std::invalid_argument("unknown config key '" + key + "'");
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    }
    apply_setting(base, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

std::string dump_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& s : settings()) {
    out += "# " + s.doc.description + "\n" + s.doc.key + " = " + s.get(cfg) + "\n";
  }
  return out;
}

}  // namespace cotans
