#include "cotans/acoustic_sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "cotans/raw_io.hpp"

namespace cotans {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kInterpHalfWidth = 4;  // 8 taps: offsets -3..4 around the integer delay

double windowed_sinc(double x) {
  const double ax = std::abs(x);
  if (ax >= kInterpHalfWidth) return 0.0;
  const double window = 0.5 * (1.0 + std::cos(kPi * x / kInterpHalfWidth));
  if (ax < 1e-12) return window;
  return std::sin(kPi * x) / (kPi * x) * window;
}

}  // namespace

std::size_t PulseSpec::length() const {
  return static_cast<std::size_t>(std::llround(duration * sample_rate));
}

void validate(const PulseSpec& spec) {
  if (!(spec.sample_rate > 0.0)) throw std::invalid_argument("sample rate must be positive");
  if (!(spec.band_lo > 0.0 && spec.band_lo < spec.band_hi && spec.band_hi < spec.sample_rate / 2)) {
    throw std::invalid_argument("pulse band must satisfy 0 < lo < hi < fs/2");
  }
  if (!(spec.duration * spec.sample_rate >= 16.0)) {
    throw std::invalid_argument("pulse must span at least 16 samples");
  }
}

std::vector<double> synth_pulse(const PulseSpec& spec) {
  validate(spec);
  const std::size_t n = spec.length();
  const double sweep = (spec.band_hi - spec.band_lo) / spec.duration;
  std::vector<double> pulse(n);
  double energy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / spec.sample_rate;
    const double window = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(i) /
                                                 static_cast<double>(n - 1)));
    pulse[i] = window * std::sin(2.0 * kPi * (spec.band_lo * t + 0.5 * sweep * t * t));
    energy += pulse[i] * pulse[i];
  }
  const double scale = 1.0 / std::sqrt(energy);
  for (auto& v : pulse) v *= scale;
  return pulse;
}

std::vector<ChannelTap> channel_taps(const Scenario& scenario, std::size_t receiver_index) {
  if (receiver_index >= scenario.receivers.size()) {
    throw std::out_of_range("receiver index " + std::to_string(receiver_index));
  }
  const Point2& r = scenario.receivers[receiver_index];
  const double c = scenario.sound_speed;
  std::vector<ChannelTap> taps;
  taps.reserve(scenario.boundaries.size() + 1);
  taps.push_back({distance(scenario.emitter, r) / c, 1.0});
  for (const auto& b : scenario.boundaries) {
    taps.push_back({nlos_distance(scenario.emitter, r, b) / c, 1.0});
  }
  // Stable so the LOS tap stays first on a grazing (equal-length) reflection.
  std::stable_sort(taps.begin(), taps.end(),
                   [](const ChannelTap& a, const ChannelTap& b) { return a.delay < b.delay; });
  return taps;
}

double noise_variance(double snr_db) {
  if (!std::isfinite(snr_db)) return 0.0;
  return 0.5 * std::pow(10.0, -snr_db / 10.0);
}

std::size_t record_length(std::span<const ChannelTap> taps, std::size_t pulse_length,
                          double sample_rate) {
  double max_delay = 0.0;
  for (const auto& t : taps) max_delay = std::max(max_delay, t.delay);
  const double span = max_delay * sample_rate + static_cast<double>(pulse_length) + kInterpHalfWidth;
  return static_cast<std::size_t>(std::ceil(span * 1.1));
}

void add_delayed(std::span<double> out, std::span<const double> pulse, double delay_samples,
                 double amplitude) {
  const double whole = std::floor(delay_samples);
  const double frac = delay_samples - whole;
  const auto shift = static_cast<long long>(whole);
  const auto n_out = static_cast<long long>(out.size());
  if (frac == 0.0) {
    for (std::size_t k = 0; k < pulse.size(); ++k) {
      const long long idx = static_cast<long long>(k) + shift;
      if (idx >= 0 && idx < n_out) out[static_cast<std::size_t>(idx)] += amplitude * pulse[k];
    }
    return;
  }
  double taps[2 * kInterpHalfWidth];
  for (int m = -kInterpHalfWidth + 1; m <= kInterpHalfWidth; ++m) {
    taps[m + kInterpHalfWidth - 1] = amplitude * windowed_sinc(m - frac);
  }
  for (std::size_t k = 0; k < pulse.size(); ++k) {
    const long long base = static_cast<long long>(k) + shift;
    for (int m = -kInterpHalfWidth + 1; m <= kInterpHalfWidth; ++m) {
      const long long idx = base + m;
      if (idx >= 0 && idx < n_out) {
        out[static_cast<std::size_t>(idx)] += taps[m + kInterpHalfWidth - 1] * pulse[k];
      }
    }
  }
}

ReceivedSignal render_taps(std::span<const ChannelTap> taps, std::span<const double> pulse,
                           double sample_rate, double snr_db, std::uint64_t seed,
                           std::size_t length) {
  if (length == 0) length = record_length(taps, pulse.size(), sample_rate);
  ReceivedSignal sig;
  sig.sample_rate = sample_rate;
  sig.snr_db = snr_db;
  sig.samples.assign(length, 0.0);
  for (const auto& t : taps) {
    if (t.delay < 0.0) throw std::invalid_argument("negative tap delay");
    add_delayed(sig.samples, pulse, t.delay * sample_rate, t.amplitude);
  }
  const double var = noise_variance(snr_db);
  if (var > 0.0) {
    const double sigma = std::sqrt(var);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (auto& v : sig.samples) v += sigma * gauss(rng);
  }
  return sig;
}

ReceivedSignal render_received(const Scenario& scenario, const PulseSpec& spec,
                               std::size_t receiver_index, double snr_db, std::uint64_t seed) {
  const auto pulse = synth_pulse(spec);
  const auto taps = channel_taps(scenario, receiver_index);
  return render_taps(taps, pulse, spec.sample_rate, snr_db, seed);
}

void write_waveform(const std::filesystem::path& path, const ReceivedSignal& signal) {
  write_f32(path, signal.samples);
  std::ofstream hdr(path.string() + ".hdr", std::ios::trunc);
  if (!hdr) throw std::runtime_error("cannot write header for " + path.string());
  hdr.precision(17);
  hdr << "sample_rate=" << signal.sample_rate << "\n"
      << "length=" << signal.samples.size() << "\n"
      << "snr_db=" << (std::isfinite(signal.snr_db) ? std::to_string(signal.snr_db) : "inf") << "\n";
}

ReceivedSignal read_waveform(const std::filesystem::path& path) {
  ReceivedSignal sig;
  sig.samples = read_f32(path);
  std::ifstream hdr(path.string() + ".hdr");
  if (!hdr) throw std::runtime_error("missing header for " + path.string());
  std::string line;
  std::size_t length = sig.samples.size();
  while (std::getline(hdr, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const auto key = line.substr(0, eq);
    const auto value = line.substr(eq + 1);
    if (key == "sample_rate") sig.sample_rate = std::stod(value);
    if (key == "length") length = std::stoul(value);
    if (key == "snr_db") sig.snr_db = value == "inf" ? kNoiseless : std::stod(value);
  }
  if (length != sig.samples.size()) throw std::runtime_error("waveform length mismatch in header");
  return sig;
}

}  // namespace cotans
