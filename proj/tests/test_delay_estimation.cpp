#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"

#include "cotans/acoustic_sim.hpp"
#include "cotans/delay_estimation.hpp"

using namespace cotans;

namespace {

constexpr double kFs = 100e3;

const std::vector<double>& pulse() {
  static const auto p = synth_pulse(PulseSpec{});
  return p;
}

double min_sep() { return mainlobe_width(pulse()) / kFs; }

ReceivedSignal two_paths(double first_samples, double gap_samples, double snr_db, std::uint64_t seed,
                         std::size_t length = 1000) {
  const std::vector<ChannelTap> taps{{first_samples / kFs, 1.0},
                                     {(first_samples + gap_samples) / kFs, 1.0}};
  return render_taps(taps, pulse(), kFs, snr_db, seed, length);
}

}  // namespace

TEST_CASE("cross_correlate rejects short signals") {
  const std::vector<double> x(10, 1.0);
  CHECK_THROWS_AS(cross_correlate(x, pulse()), std::invalid_argument);
  ReceivedSignal sig{x, kFs, kNoiseless};
  CHECK_THROWS_AS(mf_delays(sig, pulse(), 1, min_sep()), std::invalid_argument);
  CHECK_THROWS_AS(mf_delays(sig, pulse(), 0, min_sep()), std::invalid_argument);
}

TEST_CASE("MF: noiseless single path at 1.0 ms") {
  const auto sig = render_taps(std::vector<ChannelTap>{{1e-3, 1.0}}, pulse(), kFs, kNoiseless, 0);
  const auto est = mf_delays(sig, pulse(), 1, min_sep());
  REQUIRE(est.taus.size() == 1);
  CHECK(std::abs(est.taus[0] - 1e-3) * kFs < 0.1);
  CHECK(est.amplitudes[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("MF: sub-sample accuracy across fractional offsets") {
  for (double frac = 0.0; frac < 1.0; frac += 0.1) {
    const auto sig = render_taps(std::vector<ChannelTap>{{(150 + frac) / kFs, 1.0}}, pulse(), kFs,
                                 kNoiseless, 0);
    const auto est = mf_delays(sig, pulse(), 1, min_sep());
    CHECK(std::abs(est.taus[0] * kFs - (150 + frac)) < 0.1);
  }
}

TEST_CASE("MF: two well separated paths") {
  const auto sig = two_paths(120.3, 5 * 200, kNoiseless, 0, 1600);
  const auto est = mf_delays(sig, pulse(), 2, min_sep());
  REQUIRE(est.taus.size() == 2);
  CHECK(std::abs(est.taus[0] * kFs - 120.3) < 0.1);
  CHECK(std::abs(est.taus[1] * kFs - 1120.3) < 0.1);
}

TEST_CASE("MF is equivariant to whole-sample shifts") {
  const auto sig = two_paths(100.37, 140.0, 18.0, 3);
  const auto base = mf_delays(sig, pulse(), 3, min_sep());
  ReceivedSignal shifted = sig;
  shifted.samples.insert(shifted.samples.begin(), 17, 0.0);
  const auto moved = mf_delays(shifted, pulse(), 3, min_sep());
  REQUIRE(base.taus.size() == moved.taus.size());
  for (std::size_t i = 0; i < base.taus.size(); ++i) {
    CHECK(moved.taus[i] - base.taus[i] == doctest::Approx(17.0 / kFs).epsilon(1e-9));
  }
}

TEST_CASE("SAGE: one path reduces to MF") {
  for (double d : {100.0, 123.4, 250.77}) {
    const auto sig = render_taps(std::vector<ChannelTap>{{d / kFs, 1.0}}, pulse(), kFs, kNoiseless, 0);
    const auto mf = mf_delays(sig, pulse(), 1, min_sep());
    const auto sage = sage_delays(sig, pulse(), 1);
    REQUIRE(sage.taus.size() == 1);
    CHECK(std::abs(sage.taus[0] - mf.taus[0]) * kFs < 1e-3);
    CHECK(sage.converged);
  }
}

TEST_CASE("SAGE: overlapping noiseless paths at half a pulse") {
  for (double start : {90.0, 101.25, 133.6}) {
    const auto sig = two_paths(start, 100.0, kNoiseless, 0);
    const auto est = sage_delays(sig, pulse(), 2);
    REQUIRE(est.taus.size() == 2);
    CHECK(std::abs(est.taus[0] * kFs - start) < 0.5);
    CHECK(std::abs(est.taus[1] * kFs - start - 100.0) < 0.5);
    CHECK(est.amplitudes[0] == doctest::Approx(1.0).epsilon(0.1));
  }
}

TEST_CASE("SAGE: residual energy never increases across cycles") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> start(60, 200), gap(20, 150);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto sig = two_paths(start(rng), gap(rng), 8.0 + seed % 15, seed);
    SageTrace trace;
    sage_delays(sig, pulse(), 3, SageOptions{}, &trace);
    REQUIRE(trace.residual_energy.size() >= 2);
    for (std::size_t i = 1; i < trace.residual_energy.size(); ++i) {
      CHECK(trace.residual_energy[i] <= trace.residual_energy[i - 1] + 1e-9);
    }
  }
}

TEST_CASE("SAGE reports non-convergence instead of failing") {
  const auto sig = two_paths(100.0, 9.0, 0.0, 1);
  SageOptions opts;
  opts.max_iters = 1;
  opts.tol_samples = 1e-12;
  const auto est = sage_delays(sig, pulse(), 3, opts);
  CHECK(est.taus.size() == 3);
  CHECK(est.iterations == 1);
  CHECK_FALSE(est.converged);
  CHECK(std::is_sorted(est.taus.begin(), est.taus.end()));
}

TEST_CASE("strip_los") {
  Scenario s;
  s.emitter = {0, 0};
  s.receivers = {{1.53, 0}, {0, 3}, {3, 3}};
  DelayEstimates est{0, {1.0e-3, 2.5e-3, 3.1e-3}, {1, 1, 1}};
  const auto out = strip_los(est, s, 0);  // LOS predicted at 1.02 ms
  REQUIRE(out.taus.size() == 2);
  CHECK(out.taus[0] == 2.5e-3);
  CHECK(out.taus[1] == 3.1e-3);

  s.receivers[0] = {1.5, 0};
  DelayEstimates single{0, {1.0e-3}, {1}};
  CHECK(strip_los(single, s, 0).taus.empty());
}

TEST_CASE("strip_los leaves the geometric NLOS delays") {
  Scenario s;
  s.emitter = {3.5, 0.5};
  s.receivers = {{-2.5, 3.5}, {-2.0, 2.8}, {-3.1, 4.2}, {-1.9, 3.9}, {-2.8, 2.9}};
  s.boundaries = {{7.0, 0.4}, {5.0, -2.0}};
  const auto& p = pulse();
  for (std::size_t i = 0; i < s.receivers.size(); ++i) {
    const auto sig = render_received(s, PulseSpec{}, i, kNoiseless, 0);
    const auto nlos = strip_los(sage_delays(sig, p, 3), s, i);
    REQUIRE(nlos.taus.size() == 2);
    std::vector<double> truth;
    for (const auto& b : s.boundaries) {
      truth.push_back(oracle::reflected_path(s.emitter, s.receivers[i], b) / 1500.0);
    }
    std::sort(truth.begin(), truth.end());
    CHECK(std::abs(nlos.taus[0] - truth[0]) * kFs < 0.5);
    CHECK(std::abs(nlos.taus[1] - truth[1]) * kFs < 0.5);
  }
}

TEST_CASE("single path at 20 dB stays within one sample") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> start(50, 300);
  int good = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const double d = start(rng);
    const auto sig = render_taps(std::vector<ChannelTap>{{d / kFs, 1.0}}, pulse(), kFs, 20.0, t, 600);
    const auto est = sage_delays(sig, pulse(), 1);
    if (std::abs(est.taus[0] * kFs - d) <= 1.0) ++good;
  }
  CHECK(good >= 0.95 * trials);
}

TEST_CASE("threshold effect: more outliers at -5 dB than at 20 dB") {
  auto outlier_fraction = [](double snr) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> start(50, 1500);
    int outliers = 0;
    for (int t = 0; t < 200; ++t) {
      const double d = start(rng);
      const auto sig = render_taps(std::vector<ChannelTap>{{d / kFs, 1.0}}, pulse(), kFs, snr, t, 2000);
      const auto est = mf_delays(sig, pulse(), 1, min_sep());
      if (std::abs(est.taus[0] * kFs - d) > 10.0) ++outliers;
    }
    return outliers / 200.0;
  };
  const double low = outlier_fraction(-5.0);
  const double high = outlier_fraction(20.0);
  CHECK(low > high);
}
