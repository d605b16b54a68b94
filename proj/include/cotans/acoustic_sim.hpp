#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <vector>

#include "cotans/geometry.hpp"

namespace cotans {

/// Emitted waveform: a Hann-windowed linear chirp of unit energy.
struct PulseSpec {
  double sample_rate{100e3};
  double duration{2e-3};
  double band_lo{5e3};
  double band_hi{20e3};

  std::size_t length() const;
};

void validate(const PulseSpec& spec);

std::vector<double> synth_pulse(const PulseSpec& spec);

struct ChannelTap {
  double delay{0.0};  // seconds
  double amplitude{1.0};
};

/// LOS tap followed by one first-order echo per boundary, sorted by delay.
std::vector<ChannelTap> channel_taps(const Scenario& scenario, std::size_t receiver_index);

inline constexpr double kNoiseless = std::numeric_limits<double>::infinity();

struct ReceivedSignal {
  std::vector<double> samples;
  double sample_rate{0.0};
  double snr_db{kNoiseless};
};

/// Per-sample noise variance for a unit-energy received pulse. The SNR is
/// E_r/N_0 with both quantities in sample units, so sigma^2 = N_0/2.
double noise_variance(double snr_db);

/// Samples needed to hold every tap: last delay plus pulse, with a 10% guard.
std::size_t record_length(std::span<const ChannelTap> taps, std::size_t pulse_length,
                          double sample_rate);

/// Adds amplitude * pulse delayed by a (fractional) number of samples using
/// an 8-tap Hann-windowed sinc interpolator. Integer delays are exact copies.
/// Samples that fall outside `out` are dropped.
void add_delayed(std::span<double> out, std::span<const double> pulse, double delay_samples,
                 double amplitude);

/// Sum of delayed pulse copies plus white Gaussian noise; deterministic in seed.
/// A non-finite snr_db disables the noise. length == 0 selects record_length().
ReceivedSignal render_taps(std::span<const ChannelTap> taps, std::span<const double> pulse,
                           double sample_rate, double snr_db, std::uint64_t seed,
                           std::size_t length = 0);

ReceivedSignal render_received(const Scenario& scenario, const PulseSpec& spec,
                               std::size_t receiver_index, double snr_db, std::uint64_t seed);

/// Raw little-endian float32 samples at `path` and a text header at
/// `path` + ".hdr" holding sample_rate, length and snr_db.
void write_waveform(const std::filesystem::path& path, const ReceivedSignal& signal);
ReceivedSignal read_waveform(const std::filesystem::path& path);

}  // namespace cotans
