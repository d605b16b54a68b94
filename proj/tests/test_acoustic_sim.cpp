#include <cmath>
#include <filesystem>
#include <numeric>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"

#include "cotans/acoustic_sim.hpp"
#include "cotans/delay_estimation.hpp"

using namespace cotans;

namespace {

double energy(const std::vector<double>& v) {
  return std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
}

Scenario two_boundary_scenario() {
  Scenario s;
  s.emitter = {3.5, 0.5};
  s.receivers = {{-2.5, 3.5}, {-2.0, 2.8}, {-3.1, 4.2}, {-1.9, 3.9}, {-2.8, 2.9}};
  s.boundaries = {{7.0, 0.4}, {5.0, -2.0}};
  return s;
}

}  // namespace

TEST_CASE("default pulse: 200 samples of unit energy") {
  const PulseSpec spec;
  const auto p = synth_pulse(spec);
  CHECK(p.size() == 200);
  CHECK(energy(p) == doctest::Approx(1.0).epsilon(1e-9));
  std::vector<double> half(p);
  for (auto& v : half) v *= 0.5;
  CHECK(energy(half) == doctest::Approx(0.25));
}

TEST_CASE("invalid pulse specs are rejected") {
  CHECK_THROWS_AS(synth_pulse({100e3, 2e-3, 20e3, 5e3}), std::invalid_argument);
  CHECK_THROWS_AS(synth_pulse({100e3, 2e-3, 5e3, 60e3}), std::invalid_argument);
  CHECK_THROWS_AS(synth_pulse({100e3, 1e-4, 5e3, 20e3}), std::invalid_argument);
  CHECK_THROWS_AS(synth_pulse({100e3, 2e-3, 0.0, 20e3}), std::invalid_argument);
}

TEST_CASE("autocorrelation main lobe of the default pulse") {
  // -3 dB envelope width, about 0.9 fs / B for a 15 kHz sweep at 100 kHz.
  const double w = mainlobe_width(synth_pulse(PulseSpec{}));
  CHECK(w > 10.0);
  CHECK(w < 14.0);
}

TEST_CASE("channel taps") {
  Scenario s;
  s.emitter = {0, 0};
  s.receivers = {{1.5, 0}, {0, 3}, {3, 3}};
  auto taps = channel_taps(s, 0);
  REQUIRE(taps.size() == 1);
  CHECK(taps[0].delay == doctest::Approx(1e-3));
  CHECK(taps[0].amplitude == 1.0);

  const Scenario two = two_boundary_scenario();
  for (std::size_t i = 0; i < two.receivers.size(); ++i) {
    taps = channel_taps(two, i);
    REQUIRE(taps.size() == 3);
    CHECK(taps[0].delay == doctest::Approx(distance(two.emitter, two.receivers[i]) / 1500.0));
    for (std::size_t k = 1; k < taps.size(); ++k) CHECK(taps[k].delay >= taps[k - 1].delay);
    std::vector<double> expected;
    for (const auto& b : two.boundaries) {
      expected.push_back(oracle::reflected_path(two.emitter, two.receivers[i], b) / 1500.0);
    }
    std::sort(expected.begin(), expected.end());
    CHECK(taps[1].delay == doctest::Approx(expected[0]).epsilon(1e-9));
    CHECK(taps[2].delay == doctest::Approx(expected[1]).epsilon(1e-9));
  }
  CHECK_THROWS_AS(channel_taps(two, 5), std::out_of_range);
}

TEST_CASE("integer delays copy the pulse exactly") {
  const auto p = synth_pulse(PulseSpec{});
  std::vector<double> out(400, 0.0);
  add_delayed(out, p, 37.0, 1.0);
  for (std::size_t k = 0; k < p.size(); ++k) CHECK(out[37 + k] == p[k]);
  CHECK(out[36] == 0.0);
  CHECK(out[237] == 0.0);
}

TEST_CASE("noiseless render recovers the delay") {
  const auto p = synth_pulse(PulseSpec{});
  const std::vector<ChannelTap> taps{{1.2345e-3, 1.0}};
  const auto sig = render_taps(taps, p, 100e3, kNoiseless, 1);
  CHECK(sig.samples.size() >= p.size() + 124);
  const auto est = mf_delays(sig, p, 1, 10.0 / 100e3);
  REQUIRE(est.taus.size() == 1);
  CHECK(std::abs(est.taus[0] - 1.2345e-3) * 100e3 < 0.1);
  // Energy of one delayed copy is preserved by the interpolator.
  CHECK(energy(sig.samples) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("noise-free energy equals the number of taps") {
  const auto p = synth_pulse(PulseSpec{});
  const Scenario s = two_boundary_scenario();
  for (std::size_t i = 0; i < s.receivers.size(); ++i) {
    const auto sig = render_received(s, PulseSpec{}, i, kNoiseless, 0);
    const auto taps = channel_taps(s, i);
    // Overlapping copies interfere; compare against the sum of separately rendered copies.
    double separate = 0.0;
    for (const auto& t : taps) {
      std::vector<double> one(sig.samples.size(), 0.0);
      add_delayed(one, p, t.delay * 100e3, 1.0);
      separate += energy(one);
    }
    CHECK(separate == doctest::Approx(3.0).epsilon(0.01));
    CHECK(sig.samples.size() >= static_cast<std::size_t>(taps.back().delay * 100e3) + p.size());
  }
}

TEST_CASE("same seed gives bit-identical output, different seeds differ") {
  const Scenario s = two_boundary_scenario();
  const auto a = render_received(s, PulseSpec{}, 1, 15.0, 42);
  const auto b = render_received(s, PulseSpec{}, 1, 15.0, 42);
  const auto c = render_received(s, PulseSpec{}, 1, 15.0, 43);
  CHECK(a.samples == b.samples);
  CHECK(a.samples != c.samples);
}

TEST_CASE("noise variance matches the SNR definition") {
  const std::vector<double> pulse(16, 0.0);
  const auto sig = render_taps({}, pulse, 100e3, 20.0, 99, 10000);
  double mean = 0.0;
  for (double v : sig.samples) mean += v;
  mean /= sig.samples.size();
  double var = 0.0;
  for (double v : sig.samples) var += (v - mean) * (v - mean);
  var /= sig.samples.size() - 1;
  CHECK(std::abs(var / noise_variance(20.0) - 1.0) < 0.05);
}

TEST_CASE("Monte-Carlo SNR (E_r / N_0) matches the requested SNR") {
  const auto p = synth_pulse(PulseSpec{});
  const std::vector<ChannelTap> taps{{1e-3, 1.0}};
  const double snr_db = 17.0;
  double noise_power = 0.0;
  std::size_t count = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto clean = render_taps(taps, p, 100e3, kNoiseless, seed);
    const auto noisy = render_taps(taps, p, 100e3, snr_db, seed);
    for (std::size_t i = 0; i < clean.samples.size(); ++i) {
      const double n = noisy.samples[i] - clean.samples[i];
      noise_power += n * n;
      ++count;
    }
  }
  const double n0 = 2.0 * noise_power / count;  // sigma^2 = N_0 / 2
  const double measured = 10.0 * std::log10(1.0 / n0);
  CHECK(std::abs(measured - snr_db) < 0.2);
}

TEST_CASE("waveform dump round-trips through float32") {
  const auto sig = render_received(two_boundary_scenario(), PulseSpec{}, 0, 20.0, 5);
  const auto path = std::filesystem::temp_directory_path() / "cotans_wave_test.f32";
  write_waveform(path, sig);
  const auto back = read_waveform(path);
  REQUIRE(back.samples.size() == sig.samples.size());
  CHECK(back.sample_rate == sig.sample_rate);
  CHECK(back.snr_db == doctest::Approx(20.0));
  for (std::size_t i = 0; i < sig.samples.size(); ++i) {
    CHECK(back.samples[i] == static_cast<double>(static_cast<float>(sig.samples[i])));
  }
  CHECK(std::filesystem::file_size(path) == 4 * sig.samples.size());
  std::filesystem::remove(path);
  std::filesystem::remove(path.string() + ".hdr");
}
